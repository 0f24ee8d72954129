#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "dpwm/partition.hpp"
#include "test_support.hpp"

namespace dpwm::partition {
namespace {

int gf2_entry(const Matrix4& a, const Matrix4& b, int r, int c)
{
    int s = 0;
    for (int k = 0; k < 4; ++k)
        s ^= a[r][k] & b[k][c];
    return s;
}

// Inverse over GF(2) by trying all 2^16 binary matrices.
Matrix4 brute_inverse(const Matrix4& t)
{
    for (unsigned code = 0; code < (1u << 16); ++code) {
        Matrix4 u{};
        for (int i = 0; i < 16; ++i)
            u[i / 4][i % 4] = static_cast<int>((code >> i) & 1u);
        bool ok = true;
        for (int r = 0; r < 4 && ok; ++r)
            for (int c = 0; c < 4 && ok; ++c)
                ok = gf2_entry(t, u, r, c) == (r == c ? 1 : 0);
        if (ok)
            return u;
    }
    throw std::logic_error("no inverse");
}

TEST(Determinant, Known)
{
    Matrix4 id{};
    for (int i = 0; i < 4; ++i)
        id[i][i] = 1;
    EXPECT_EQ(determinant(id), 1);
    Matrix4 two = id;
    two[0][0] = 2;
    EXPECT_EQ(determinant(two), 2);
    Matrix4 dup = id;
    dup[1] = dup[0];
    EXPECT_EQ(determinant(dup), 0);
}

TEST(BinaryWaveletMatrix, PrintedMatrixRejected)
{
    EXPECT_EQ(determinant(BinaryWaveletMatrix::printed()), 2);
    try {
        BinaryWaveletMatrix t(BinaryWaveletMatrix::printed());
        FAIL() << "printed matrix accepted";
    } catch (const SingularMatrixError& e) {
        EXPECT_EQ(e.determinant(), 2);
    }
}

TEST(BinaryWaveletMatrix, StandardInverse)
{
    const BinaryWaveletMatrix t = BinaryWaveletMatrix::standard();
    EXPECT_EQ(t.determinant(), 1);
    EXPECT_EQ(t.inverse(), brute_inverse(t.forward()));
}

TEST(BinaryWaveletMatrix, RejectsNonBinaryEntries)
{
    Matrix4 m{};
    for (int i = 0; i < 4; ++i)
        m[i][i] = 1;
    m[0][1] = 3;
    EXPECT_THROW(BinaryWaveletMatrix{m}, ParameterError);
}

TEST(Spatial, TwoByTwoExample)
{
    const BitPlane logo(2, 2, std::vector<std::uint8_t>{1, 0, 0, 0});
    const Partitioned p = split_spatial(logo);
    EXPECT_EQ(std::get<BitPlane>(p.base), BitPlane(1, 1, std::vector<std::uint8_t>{1}));
    EXPECT_EQ(std::get<TernaryPlane>(p.enhancement), TernaryPlane(2, 2, std::vector<std::int8_t>{0, -1, -1, -1}));
    EXPECT_EQ(reconstruct(p), logo);
}

TEST(Spatial, AllOnes)
{
    const Partitioned p = split_spatial(BitPlane(8, 8, 1));
    EXPECT_EQ(std::get<BitPlane>(p.base), BitPlane(4, 4, 1));
    EXPECT_EQ(std::get<TernaryPlane>(p.enhancement), TernaryPlane(8, 8, 0));
}

TEST(Spatial, Sizes)
{
    const Partitioned p = split_spatial(test::random_logo(64, 64, 3));
    EXPECT_EQ(std::get<BitPlane>(p.base).width(), 32);
    EXPECT_EQ(std::get<BitPlane>(p.base).height(), 32);
    EXPECT_EQ(std::get<TernaryPlane>(p.enhancement).width(), 64);
    EXPECT_EQ(p.alphabet_size_base, 2);
    EXPECT_EQ(p.alphabet_size_enh, 3);
}

TEST(Spatial, OddSizeRejected) { EXPECT_THROW(split_spatial(BitPlane(5, 4)), DimensionError); }

TEST(Spatial, CombineClamps)
{
    const BitPlane base(1, 1, 1);
    const TernaryPlane enh(2, 2, std::vector<std::int8_t>{1, 0, -1, 1});
    EXPECT_EQ(combine_spatial(base, enh), BitPlane(2, 2, std::vector<std::uint8_t>{1, 1, 0, 1}));
}

TEST(Spatial, Upsample)
{
    const BitPlane b(2, 1, std::vector<std::uint8_t>{1, 0});
    EXPECT_EQ(upsample2x(b), BitPlane(4, 2, std::vector<std::uint8_t>{1, 1, 0, 0, 1, 1, 0, 0}));
}

TEST(Bwd, ZeroLogo)
{
    const Partitioned p = split_bwd(BitPlane(16, 16), BinaryWaveletMatrix::standard());
    EXPECT_EQ(std::get<BitPlane>(p.base), BitPlane(8, 8));
    const auto& bands = std::get<WaveletBands>(p.enhancement);
    EXPECT_EQ(bands.lh, BitPlane(8, 8));
    EXPECT_EQ(bands.hl, BitPlane(8, 8));
    EXPECT_EQ(bands.hh, BitPlane(8, 8));
    EXPECT_EQ(p.alphabet_size_base, 2);
    EXPECT_EQ(p.alphabet_size_enh, 2);
}

TEST(Bwd, RoundTrip)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BitPlane logo = test::random_logo(64, 64, seed);
        EXPECT_EQ(reconstruct(split_bwd(logo, BinaryWaveletMatrix::standard())), logo);
    }
}

TEST(Bwd, SizeNotMultipleOfFour) { EXPECT_THROW(split_bwd(BitPlane(6, 8), BinaryWaveletMatrix::standard()), DimensionError); }

TEST(Svd, FullRankIsExact)
{
    const BitPlane logo = test::random_logo(16, 16, 9);
    const Partitioned p = split_svd(logo, 16);
    const auto& base = std::get<RealPlane>(p.base);
    const auto& enh = std::get<RealPlane>(p.enhancement);
    for (std::size_t i = 0; i < logo.size(); ++i) {
        EXPECT_NEAR(base.values()[i], logo.values()[i], 1e-9);
        EXPECT_NEAR(enh.values()[i], 0.0, 1e-9);
    }
}

TEST(Svd, ZeroLogo)
{
    const Partitioned p = split_svd(BitPlane(8, 8), 3);
    for (double v : std::get<RealPlane>(p.base).values())
        EXPECT_EQ(v, 0.0);
    for (double v : std::get<RealPlane>(p.enhancement).values())
        EXPECT_EQ(v, 0.0);
    EXPECT_EQ(reconstruct(p), BitPlane(8, 8));
}

TEST(Svd, DeskLogoRankFive)
{
    const BitPlane logo = test::desk_logo();
    const Partitioned p = split_svd(logo, 5);
    EXPECT_EQ(reconstruct(p), logo);
    EXPECT_GT(p.alphabet_size_base, 3);
    EXPECT_GT(p.alphabet_size_enh, 3);
    // The base alone is only an approximation.
    const auto& base = std::get<RealPlane>(p.base);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < logo.size(); ++i)
        wrong += (base.values()[i] >= 0.5 ? 1u : 0u) != logo.values()[i];
    EXPECT_GT(wrong, 0u);
}

// Rank-1 residual energy equals ||X||^2 - sigma_1^2, with sigma_1 from power iteration.
TEST(Svd, RankOneMatchesPowerIteration)
{
    const BitPlane logo = test::random_logo(24, 24, 31);
    const int n = 24;
    auto x = [&](int r, int c) { return static_cast<double>(logo.at(c, r)); };
    std::vector<double> v(n, 1.0), w(n);
    double sigma2 = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double xv = 0.0;
                for (int j = 0; j < n; ++j)
                    xv += x(k, j) * v[j];
                s += x(k, c) * xv;
            }
            w[c] = s;
        }
        double norm = 0.0;
        for (double t : w)
            norm += t * t;
        norm = std::sqrt(norm);
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
            dot += v[i] * w[i];
        double vv = 0.0;
        for (double t : v)
            vv += t * t;
        sigma2 = dot / vv;
        for (int i = 0; i < n; ++i)
            v[i] = w[i] / norm;
    }
    const auto& base = std::get<RealPlane>(split_svd(logo, 1).base);
    double total = 0.0, residual = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            total += x(r, c) * x(r, c);
            const double d = x(r, c) - base.at(c, r);
            residual += d * d;
        }
    EXPECT_NEAR(residual, total - sigma2, 1e-6);
}

TEST(Svd, ResidualOrthogonalToBase)
{
    const BitPlane logo = test::desk_logo();
    const Partitioned p = split_svd(logo, 5);
    const auto& base = std::get<RealPlane>(p.base);
    const auto& enh = std::get<RealPlane>(p.enhancement);
    double dot = 0.0;
    for (std::size_t i = 0; i < logo.size(); ++i)
        dot += base.values()[i] * enh.values()[i];
    EXPECT_NEAR(dot, 0.0, 1e-6);
}

TEST(Svd, RankOutOfRange)
{
    EXPECT_THROW(split_svd(BitPlane(8, 8), 0), ParameterError);
    EXPECT_THROW(split_svd(BitPlane(8, 8), 9), ParameterError);
}

TEST(Split, DispatchesOnMethod)
{
    const BitPlane logo = test::random_logo(16, 16, 4);
    EXPECT_TRUE(std::holds_alternative<SpatialScalability>(split(logo, SpatialScalability{}).method));
    EXPECT_TRUE(std::holds_alternative<BinaryWavelet>(split(logo, BinaryWavelet{}).method));
    EXPECT_TRUE(std::holds_alternative<TruncatedSvd>(split(logo, TruncatedSvd{4}).method));
}

TEST(Propagation, SpatialEnhancementIsOne)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Propagation p = error_propagation(SpatialScalability{}, test::random_logo(32, 32, seed));
        EXPECT_EQ(p.enhancement_mean, 1.0);
        EXPECT_EQ(p.enhancement_positions, 32u * 32u);
        EXPECT_EQ(p.base_positions, 16u * 16u);
    }
}

TEST(Propagation, SpatialBaseMatchesOracle)
{
    const BitPlane logo = test::random_logo(32, 32, 77);
    const Partitioned clean = split_spatial(logo);
    const auto& base = std::get<BitPlane>(clean.base);
    const auto& enh = std::get<TernaryPlane>(clean.enhancement);
    std::size_t total = 0;
    for (int by = 0; by < 16; ++by)
        for (int bx = 0; bx < 16; ++bx)
            for (int k = 0; k < 4; ++k) {
                const int e = enh.at(2 * bx + k % 2, 2 * by + k / 2);
                const int b = base.at(bx, by);
                total += std::clamp(b + e, 0, 1) != std::clamp(1 - b + e, 0, 1);
            }
    EXPECT_DOUBLE_EQ(error_propagation(SpatialScalability{}, logo).base_mean, static_cast<double>(total) / 256.0);
}

TEST(Propagation, BwdMatchesColumnWeightOracle)
{
    const BinaryWaveletMatrix t = BinaryWaveletMatrix::standard();
    const Matrix4 u = brute_inverse(t.forward());
    // Flipping coefficient (i,j) toggles the outer product of columns i and j of the inverse.
    int w[4]{};
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r)
            w[c] += u[r][c];
    double low = 0.0, all = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            all += w[i] * w[j];
            if (i < 2 && j < 2)
                low += w[i] * w[j];
        }

    const Propagation p = error_propagation(BinaryWavelet{t}, test::random_logo(64, 64, 8));
    EXPECT_DOUBLE_EQ(p.overall_mean, all / 16.0);
    EXPECT_DOUBLE_EQ(p.base_mean, low / 4.0);
    EXPECT_DOUBLE_EQ(p.enhancement_mean, (all - low) / 12.0);
    EXPECT_GT(p.enhancement_mean, 1.0);
    EXPECT_DOUBLE_EQ(p.overall_mean, 6.25);
}

TEST(Propagation, SvdRuns)
{
    const Propagation p = error_propagation(TruncatedSvd{5}, test::desk_logo());
    EXPECT_EQ(p.enhancement_positions, 64u * 64u);
    EXPECT_GE(p.enhancement_mean, 1.0);
}

} // namespace
} // namespace dpwm::partition
