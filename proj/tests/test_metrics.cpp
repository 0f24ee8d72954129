#include <gtest/gtest.h>

#include <cmath>

#include "dpwm/metrics.hpp"
#include "test_support.hpp"

namespace dpwm {
namespace {

TEST(Psnr, IdenticalIsInfinite)
{
    const GrayImage a = test::random_image(32, 32, 1);
    EXPECT_TRUE(std::isinf(psnr(a, a)));
    EXPECT_EQ(format_db(psnr(a, a)), "inf");
}

TEST(Psnr, OnePixelOffByOne)
{
    GrayImage a(512, 512, 100);
    GrayImage b = a;
    b.at(17, 300) = 101;
    // 10*log10(255^2 * 262144)
    EXPECT_NEAR(psnr(a, b), 102.31, 0.01);
}

TEST(Psnr, MaximalErrorIsZeroDb)
{
    EXPECT_DOUBLE_EQ(psnr(GrayImage(8, 8, 0), GrayImage(8, 8, 255)), 0.0);
}

TEST(Psnr, SymmetricAndChecksShape)
{
    const GrayImage a = test::random_image(40, 24, 2);
    const GrayImage b = test::random_image(40, 24, 3);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_THROW(psnr(a, GrayImage(24, 40)), DimensionError);
}

TEST(Ber, Basics)
{
    const BitPlane a = test::random_logo(64, 64, 5);
    EXPECT_EQ(ber(a, a), 0.0);
    EXPECT_EQ(ber(a, a.complement()), 100.0);

    BitPlane b = a;
    for (int i = 0; i < 41; ++i)
        b.values()[static_cast<std::size_t>(i * 97)] ^= 1u;
    EXPECT_NEAR(ber(a, b), 100.0 * 41.0 / 4096.0, 1e-12);
    EXPECT_NEAR(ber(a, b), 1.0009, 1e-4);
    EXPECT_THROW(ber(a, BitPlane(32, 32)), DimensionError);
}

TEST(Ber, ComplementSumsToHundred)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const BitPlane a = test::random_logo(33, 17, seed);
        const BitPlane b = test::random_logo(33, 17, seed + 1000);
        EXPECT_EQ(ber(a, b) + ber(a, b.complement()), 100.0);
    }
}

TEST(FormatDb, TwoDecimals)
{
    EXPECT_EQ(format_db(44.064), "44.06");
    EXPECT_EQ(format_db(0.0), "0.00");
}

} // namespace
} // namespace dpwm
