#pragma once

// Splitting a binary logo into a base part and an enhancement part, the
// inverse reconstruction, and the single-error propagation analysis used to
// compare partitioning methods.

#include <array>
#include <cstdint>
#include <variant>

#include "dpwm/image.hpp"

namespace dpwm::partition {

using Matrix4 = std::array<std::array<int, 4>, 4>;

/// Integer determinant by cofactor expansion.
long long determinant(const Matrix4& m);

class SingularMatrixError : public ParameterError {
public:
    explicit SingularMatrixError(long long det);
    long long determinant() const noexcept { return det_; }

private:
    long long det_;
};

/// 4x4 binary matrix invertible over GF(2).
class BinaryWaveletMatrix {
public:
    /// Throws SingularMatrixError when the integer determinant is even and
    /// ParameterError when an entry is not 0/1.
    explicit BinaryWaveletMatrix(const Matrix4& t);

    /// The usual published T. Determinant 2, so constructing from it fails.
    static Matrix4 printed();
    /// Default used by the library: the printed matrix with entry (2,1)
    /// cleared, determinant 1.
    static BinaryWaveletMatrix standard();

    const Matrix4& forward() const noexcept { return t_; }
    const Matrix4& inverse() const noexcept { return inv_; }
    long long determinant() const noexcept { return det_; }

private:
    Matrix4 t_;
    Matrix4 inv_;
    long long det_;
};

struct TruncatedSvd {
    int rank;
};
struct BinaryWavelet {
    BinaryWaveletMatrix t = BinaryWaveletMatrix::standard();
};
struct SpatialScalability {};

using Method = std::variant<TruncatedSvd, BinaryWavelet, SpatialScalability>;

/// The three detail sub-bands of the single-level binary wavelet.
struct WaveletBands {
    BitPlane lh; ///< top-right quadrant of each coefficient tile
    BitPlane hl; ///< bottom-left
    BitPlane hh; ///< bottom-right
};

using BasePart = std::variant<BitPlane, RealPlane>;
using EnhancementPart = std::variant<TernaryPlane, RealPlane, WaveletBands>;

struct Partitioned {
    Method method;
    BasePart base;
    EnhancementPart enhancement;
    int width = 0;  ///< logo size
    int height = 0;
    /// Number of levels each part can take: the alphabet size for bit and
    /// ternary planes, the count of distinct values for real planes.
    int alphabet_size_base = 0;
    int alphabet_size_enh = 0;
};

/// base = rank-p truncated SVD approximation, enhancement = logo - base.
Partitioned split_svd(const BitPlane& logo, int rank);

/// Blockwise on 4x4 tiles: B = T X T^T over GF(2); the top-left quadrant of
/// every B forms the base (LL) band, the other quadrants the detail bands.
Partitioned split_bwd(const BitPlane& logo, const BinaryWaveletMatrix& t);

/// base(i,j) = logo(2i,2j); enhancement = logo - upsample2x(base).
Partitioned split_spatial(const BitPlane& logo);

Partitioned split(const BitPlane& logo, const Method& method);

/// Exact inverse of the split on clean parts. Corrupted spatial parts are
/// clamped to {0,1}; the SVD sum is re-binarized at 0.5.
BitPlane reconstruct(const Partitioned& parts);

/// Nearest-neighbour 2x replication.
BitPlane upsample2x(const BitPlane& plane);

/// Logo rebuilt from a half-resolution base and a ternary enhancement plane,
/// clamped to {0,1}.
BitPlane combine_spatial(const BitPlane& base, const TernaryPlane& enhancement);

struct Propagation {
    /// Mean reconstructed-bit errors per single enhancement-part error.
    double enhancement_mean = 0.0;
    /// Mean reconstructed-bit errors per single base-part error.
    double base_mean = 0.0;
    /// Mean over every position of both parts.
    double overall_mean = 0.0;
    std::size_t enhancement_positions = 0;
    std::size_t base_positions = 0;
};

/// Exhaustive single-error analysis: every position of every part is
/// corrupted in turn, the logo rebuilt and compared with the clean rebuild.
///
/// A single error means: a bit flip for bit planes; for the spatial
/// enhancement, replacing the symbol by the other value admissible under the
/// co-located base pixel ({-1,0} over a 1, {0,+1} over a 0); for real planes,
/// a unit shift toward the opposite bit.
Propagation error_propagation(const Method& method, const BitPlane& logo);

} // namespace dpwm::partition
