#include "dpwm/partition.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace dpwm::partition {

namespace {

long long det3(const Matrix4& m, int skip_row, int skip_col)
{
    int rows[3];
    int cols[3];
    for (int i = 0, r = 0; i < 4; ++i)
        if (i != skip_row)
            rows[r++] = i;
    for (int j = 0, c = 0; j < 4; ++j)
        if (j != skip_col)
            cols[c++] = j;
    auto e = [&](int r, int c) { return static_cast<long long>(m[rows[r]][cols[c]]); };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

// Gauss-Jordan elimination mod 2; the caller has checked invertibility.
Matrix4 gf2_inverse(const Matrix4& m)
{
    std::array<std::array<int, 8>, 4> aug{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            aug[i][j] = m[i][j] & 1;
        aug[i][4 + i] = 1;
    }
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        while (pivot < 4 && aug[pivot][col] == 0)
            ++pivot;
        std::swap(aug[col], aug[pivot]);
        for (int r = 0; r < 4; ++r)
            if (r != col && aug[r][col])
                for (int j = 0; j < 8; ++j)
                    aug[r][j] ^= aug[col][j];
    }
    Matrix4 inv{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            inv[i][j] = aug[i][4 + j];
    return inv;
}

// out = left * x * right^T over GF(2), 4x4.
Matrix4 gf2_sandwich(const Matrix4& left, const Matrix4& x, const Matrix4& right)
{
    Matrix4 tmp{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int acc = 0;
            for (int k = 0; k < 4; ++k)
                acc ^= left[i][k] & x[k][j];
            tmp[i][j] = acc;
        }
    Matrix4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int acc = 0;
            for (int k = 0; k < 4; ++k)
                acc ^= tmp[i][k] & right[j][k];
            out[i][j] = acc;
        }
    return out;
}

int count_distinct(const RealPlane& plane)
{
    // Values closer than 1e-9 are the same level.
    std::set<long long> levels;
    for (double v : plane.values())
        levels.insert(std::llround(v * 1e9));
    return static_cast<int>(levels.size());
}

std::size_t count_diff(const BitPlane& a, const BitPlane& b)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        n += a.values()[i] != b.values()[i];
    return n;
}

template <typename T>
const T& expect(const auto& v, const char* what)
{
    const T* p = std::get_if<T>(&v);
    if (p == nullptr)
        throw ParameterError(std::string("partition parts do not match method: ") + what);
    return *p;
}

BitPlane reconstruct_bwd(const BinaryWaveletMatrix& t, const BitPlane& ll, const WaveletBands& bands, int width,
                         int height)
{
    for (const BitPlane* band : {&ll, &bands.lh, &bands.hl, &bands.hh})
        if (band->width() * 2 != width || band->height() * 2 != height)
            throw DimensionError("wavelet band sizes do not match the logo");
    BitPlane out(width, height);
    for (int ty = 0; ty < height / 4; ++ty) {
        for (int tx = 0; tx < width / 4; ++tx) {
            Matrix4 coeffs{};
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    const int bx = tx * 2 + c;
                    const int by = ty * 2 + r;
                    coeffs[r][c] = ll.at(bx, by);
                    coeffs[r][c + 2] = bands.lh.at(bx, by);
                    coeffs[r + 2][c] = bands.hl.at(bx, by);
                    coeffs[r + 2][c + 2] = bands.hh.at(bx, by);
                }
            const Matrix4 x = gf2_sandwich(t.inverse(), coeffs, t.inverse());
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    out.at(tx * 4 + c, ty * 4 + r) = static_cast<std::uint8_t>(x[r][c]);
        }
    }
    return out;
}

} // namespace

long long determinant(const Matrix4& m)
{
    long long det = 0;
    for (int j = 0; j < 4; ++j) {
        const long long sign = (j % 2 == 0) ? 1 : -1;
        det += sign * m[0][j] * det3(m, 0, j);
    }
    return det;
}

SingularMatrixError::SingularMatrixError(long long det)
    : ParameterError("binary wavelet matrix is singular over GF(2): integer determinant " + std::to_string(det) +
                     " is even"),
      det_(det)
{
}

BinaryWaveletMatrix::BinaryWaveletMatrix(const Matrix4& t) : t_(t), inv_{}, det_(partition::determinant(t))
{
    for (const auto& row : t)
        for (int v : row)
            if (v != 0 && v != 1)
                throw ParameterError("binary wavelet matrix entries must be 0 or 1");
    if (det_ % 2 == 0)
        throw SingularMatrixError(det_);
    inv_ = gf2_inverse(t_);
}

Matrix4 BinaryWaveletMatrix::printed()
{
    return {{{1, 1, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 1, 1}}};
}

BinaryWaveletMatrix BinaryWaveletMatrix::standard()
{
    Matrix4 t = printed();
    t[1][0] = 0;
    return BinaryWaveletMatrix(t);
}

BitPlane upsample2x(const BitPlane& plane)
{
    BitPlane out(plane.width() * 2, plane.height() * 2);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out.at(x, y) = plane.at(x / 2, y / 2);
    return out;
}

BitPlane combine_spatial(const BitPlane& base, const TernaryPlane& enhancement)
{
    if (enhancement.width() != base.width() * 2 || enhancement.height() != base.height() * 2)
        throw DimensionError("enhancement plane must be twice the base resolution");
    BitPlane out(enhancement.width(), enhancement.height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            const int v = base.at(x / 2, y / 2) + enhancement.at(x, y);
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 1));
        }
    return out;
}

Partitioned split_svd(const BitPlane& logo, int rank)
{
    const int max_rank = std::min(logo.width(), logo.height());
    if (rank < 1 || rank > max_rank)
        throw ParameterError("SVD rank " + std::to_string(rank) + " outside [1, " + std::to_string(max_rank) + "]");

    Eigen::MatrixXd x(logo.height(), logo.width());
    for (int y = 0; y < logo.height(); ++y)
        for (int c = 0; c < logo.width(); ++c)
            x(y, c) = logo.at(c, y);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXd approx = svd.matrixU().leftCols(rank) *
                                   svd.singularValues().head(rank).asDiagonal() *
                                   svd.matrixV().leftCols(rank).transpose();

    RealPlane base(logo.width(), logo.height());
    RealPlane enh(logo.width(), logo.height());
    for (int y = 0; y < logo.height(); ++y)
        for (int c = 0; c < logo.width(); ++c) {
            base.at(c, y) = approx(y, c);
            enh.at(c, y) = logo.at(c, y) - approx(y, c);
        }
    Partitioned out{TruncatedSvd{rank}, base, enh, logo.width(), logo.height(), 0, 0};
    out.alphabet_size_base = count_distinct(base);
    out.alphabet_size_enh = count_distinct(enh);
    return out;
}

Partitioned split_bwd(const BitPlane& logo, const BinaryWaveletMatrix& t)
{
    if (logo.width() % 4 != 0 || logo.height() % 4 != 0 || logo.empty())
        throw DimensionError("binary wavelet split needs logo dimensions that are multiples of 4");
    const int hw = logo.width() / 2;
    const int hh = logo.height() / 2;
    BitPlane ll(hw, hh);
    WaveletBands bands{BitPlane(hw, hh), BitPlane(hw, hh), BitPlane(hw, hh)};
    for (int ty = 0; ty < logo.height() / 4; ++ty) {
        for (int tx = 0; tx < logo.width() / 4; ++tx) {
            Matrix4 x{};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    x[r][c] = logo.at(tx * 4 + c, ty * 4 + r);
            const Matrix4 coeffs = gf2_sandwich(t.forward(), x, t.forward());
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    const int bx = tx * 2 + c;
                    const int by = ty * 2 + r;
                    ll.at(bx, by) = static_cast<std::uint8_t>(coeffs[r][c]);
                    bands.lh.at(bx, by) = static_cast<std::uint8_t>(coeffs[r][c + 2]);
                    bands.hl.at(bx, by) = static_cast<std::uint8_t>(coeffs[r + 2][c]);
                    bands.hh.at(bx, by) = static_cast<std::uint8_t>(coeffs[r + 2][c + 2]);
                }
        }
    }
    return Partitioned{BinaryWavelet{t}, ll, bands, logo.width(), logo.height(), 2, 2};
}

Partitioned split_spatial(const BitPlane& logo)
{
    if (logo.width() % 2 != 0 || logo.height() % 2 != 0 || logo.empty())
        throw DimensionError("spatial split needs even logo dimensions");
    BitPlane base(logo.width() / 2, logo.height() / 2);
    for (int y = 0; y < base.height(); ++y)
        for (int x = 0; x < base.width(); ++x)
            base.at(x, y) = logo.at(2 * x, 2 * y);
    const BitPlane up = upsample2x(base);
    TernaryPlane enh(logo.width(), logo.height());
    for (int y = 0; y < logo.height(); ++y)
        for (int x = 0; x < logo.width(); ++x)
            enh.at(x, y) = static_cast<std::int8_t>(int(logo.at(x, y)) - int(up.at(x, y)));
    return Partitioned{SpatialScalability{}, base, enh, logo.width(), logo.height(), 2, 3};
}

Partitioned split(const BitPlane& logo, const Method& method)
{
    return std::visit(
        [&](const auto& m) -> Partitioned {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TruncatedSvd>)
                return split_svd(logo, m.rank);
            else if constexpr (std::is_same_v<M, BinaryWavelet>)
                return split_bwd(logo, m.t);
            else
                return split_spatial(logo);
        },
        method);
}

BitPlane reconstruct(const Partitioned& parts)
{
    return std::visit(
        [&](const auto& m) -> BitPlane {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TruncatedSvd>) {
                const auto& base = expect<RealPlane>(parts.base, "SVD base");
                const auto& enh = expect<RealPlane>(parts.enhancement, "SVD enhancement");
                if (!base.same_shape(enh))
                    throw DimensionError("SVD parts differ in size");
                BitPlane out(base.width(), base.height());
                for (std::size_t i = 0; i < out.size(); ++i)
                    out.values()[i] = static_cast<std::uint8_t>(base.values()[i] + enh.values()[i] >= 0.5);
                return out;
            } else if constexpr (std::is_same_v<M, BinaryWavelet>) {
                return reconstruct_bwd(m.t, expect<BitPlane>(parts.base, "wavelet LL band"),
                                       expect<WaveletBands>(parts.enhancement, "wavelet detail bands"), parts.width,
                                       parts.height);
            } else {
                return combine_spatial(expect<BitPlane>(parts.base, "spatial base"),
                                       expect<TernaryPlane>(parts.enhancement, "spatial enhancement"));
            }
        },
        parts.method);
}

Propagation error_propagation(const Method& method, const BitPlane& logo)
{
    const Partitioned clean = split(logo, method);
    const BitPlane reference = reconstruct(clean);

    std::size_t base_errors = 0;
    std::size_t enh_errors = 0;
    Propagation out;

    auto corrupt_and_count = [&](auto&& mutate) {
        Partitioned bad = clean;
        mutate(bad);
        return count_diff(reference, reconstruct(bad));
    };

    // Flips every bit of the plane reached through `select`, one at a time.
    Partitioned scratch = clean;
    auto flip_all = [&](auto select, std::size_t& errors, std::size_t& positions) {
        const std::size_t n = select(scratch).size();
        for (std::size_t i = 0; i < n; ++i)
            errors += corrupt_and_count([&](Partitioned& p) { select(p).values()[i] ^= 1u; });
        positions += n;
    };

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, TruncatedSvd>) {
                // Unit shift toward the opposite bit.
                for (std::size_t i = 0; i < logo.size(); ++i) {
                    const double shift = logo.values()[i] ? -1.0 : 1.0;
                    enh_errors += corrupt_and_count(
                        [&](Partitioned& p) { std::get<RealPlane>(p.enhancement).values()[i] += shift; });
                    base_errors += corrupt_and_count(
                        [&](Partitioned& p) { std::get<RealPlane>(p.base).values()[i] += shift; });
                }
                out.enhancement_positions = out.base_positions = logo.size();
            } else if constexpr (std::is_same_v<M, BinaryWavelet>) {
                flip_all([](Partitioned& p) -> BitPlane& { return std::get<BitPlane>(p.base); }, base_errors,
                         out.base_positions);
                flip_all([](Partitioned& p) -> BitPlane& { return std::get<WaveletBands>(p.enhancement).lh; },
                         enh_errors, out.enhancement_positions);
                flip_all([](Partitioned& p) -> BitPlane& { return std::get<WaveletBands>(p.enhancement).hl; },
                         enh_errors, out.enhancement_positions);
                flip_all([](Partitioned& p) -> BitPlane& { return std::get<WaveletBands>(p.enhancement).hh; },
                         enh_errors, out.enhancement_positions);
            } else {
                const auto& base = std::get<BitPlane>(clean.base);
                const auto& enh = std::get<TernaryPlane>(clean.enhancement);
                for (int y = 0; y < enh.height(); ++y)
                    for (int x = 0; x < enh.width(); ++x) {
                        const int e = enh.at(x, y);
                        const int other = base.at(x / 2, y / 2) ? (e == 0 ? -1 : 0) : (e == 0 ? 1 : 0);
                        enh_errors += corrupt_and_count([&](Partitioned& p) {
                            std::get<TernaryPlane>(p.enhancement).at(x, y) = static_cast<std::int8_t>(other);
                        });
                    }
                out.enhancement_positions = enh.size();
                flip_all([](Partitioned& p) -> BitPlane& { return std::get<BitPlane>(p.base); }, base_errors,
                         out.base_positions);
            }
        },
        method);

    if (out.enhancement_positions > 0)
        out.enhancement_mean = static_cast<double>(enh_errors) / static_cast<double>(out.enhancement_positions);
    if (out.base_positions > 0)
        out.base_mean = static_cast<double>(base_errors) / static_cast<double>(out.base_positions);
    const std::size_t total = out.enhancement_positions + out.base_positions;
    if (total > 0)
        out.overall_mean = static_cast<double>(enh_errors + base_errors) / static_cast<double>(total);
    return out;
}

} // namespace dpwm::partition
