#pragma once

#include <array>
#include <vector>

#include "dpwm/dct.hpp"

namespace dpwm {

/// The four 8x8 sub-block spectra of a 16x16 block.
struct SubBlocks {
    CoeffBlock a{8}; ///< top-left
    CoeffBlock b{8}; ///< top-right
    CoeffBlock c{8}; ///< bottom-left
    CoeffBlock d{8}; ///< bottom-right

    std::array<CoeffBlock*, 4> all() { return {&a, &b, &c, &d}; }
    std::array<const CoeffBlock*, 4> all() const { return {&a, &b, &c, &d}; }
};

/// 16x16-layer spectrum from the four 8x8-layer spectra: inverse 8-point
/// DCTs, assemble in space, forward 16-point DCT.
CoeffBlock subblocks_to_layer16(const CoeffBlock& a, const CoeffBlock& b, const CoeffBlock& c, const CoeffBlock& d);
inline CoeffBlock subblocks_to_layer16(const SubBlocks& s) { return subblocks_to_layer16(s.a, s.b, s.c, s.d); }

SubBlocks layer16_to_subblocks(const CoeffBlock& layer16);

/// Dense 16x16 matrix P with A = 1/2 * P * [a b; c d] * P^T.
/// Only needed to check the closed-form relation; the pipeline uses the
/// composition above.
struct ConversionMatrix {
    static constexpr int n = 16;
    std::vector<double> p; ///< row-major

    double at(int row, int col) const { return p[static_cast<std::size_t>(row * n + col)]; }

    /// 1/2 * P * [a b; c d] * P^T
    CoeffBlock apply(const CoeffBlock& a, const CoeffBlock& b, const CoeffBlock& c, const CoeffBlock& d) const;
};

/// P = sqrt(2) * D16 * blockdiag(D8^T, D8^T).
ConversionMatrix build_conversion_matrix();

} // namespace dpwm
