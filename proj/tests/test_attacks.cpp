#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpwm/attacks.hpp"
#include "dpwm/metrics.hpp"
#include "test_support.hpp"

namespace dpwm::attacks {
namespace {

int clamp_at(const GrayImage& img, int x, int y)
{
    return img.at(std::clamp(x, 0, img.width() - 1), std::clamp(y, 0, img.height() - 1));
}

std::uint8_t round_pixel(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

// Returns the fraction of pixels that differ and fails on any difference above `slack`.
double compare(const GrayImage& a, const GrayImage& b, int slack)
{
    EXPECT_TRUE(a.same_shape(b));
    std::size_t differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int d = std::abs(int(a.values()[i]) - int(b.values()[i]));
        EXPECT_LE(d, slack) << "pixel " << i;
        differ += d != 0;
    }
    return static_cast<double>(differ) / static_cast<double>(a.size());
}

GrayImage naive_jpeg(const GrayImage& img, int qf)
{
    const auto table = scaled_luma_table(qf);
    GrayImage out(img.width(), img.height());
    auto alpha = [](int u) { return u == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8); };
    for (int by = 0; by < img.height(); by += 8)
        for (int bx = 0; bx < img.width(); bx += 8) {
            double q[8][8];
            for (int v = 0; v < 8; ++v)
                for (int u = 0; u < 8; ++u) {
                    double s = 0.0;
                    for (int y = 0; y < 8; ++y)
                        for (int x = 0; x < 8; ++x)
                            s += (img.at(bx + x, by + y) - 128.0) * std::cos((2 * y + 1) * v * std::numbers::pi / 16) *
                                 std::cos((2 * x + 1) * u * std::numbers::pi / 16);
                    s *= alpha(u) * alpha(v);
                    const int step = table[static_cast<std::size_t>(v * 8 + u)];
                    q[v][u] = std::round(s / step) * step;
                }
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    double s = 0.0;
                    for (int v = 0; v < 8; ++v)
                        for (int u = 0; u < 8; ++u)
                            s += alpha(u) * alpha(v) * q[v][u] * std::cos((2 * y + 1) * v * std::numbers::pi / 16) *
                                 std::cos((2 * x + 1) * u * std::numbers::pi / 16);
                    out.at(bx + x, by + y) = round_pixel(s + 128.0);
                }
        }
    return out;
}

TEST(Jpeg, TableAtFifty) { EXPECT_EQ(scaled_luma_table(50), standard_luma_table()); }

TEST(Jpeg, TableAtHundredIsOnes)
{
    for (int q : scaled_luma_table(100))
        EXPECT_EQ(q, 1);
}

TEST(Jpeg, TableScaling)
{
    EXPECT_EQ(standard_luma_table()[0], 16);
    EXPECT_EQ(scaled_luma_table(25)[0], 32);  // scale 200
    EXPECT_EQ(scaled_luma_table(75)[0], 8);   // scale 50
    EXPECT_EQ(scaled_luma_table(1)[63], 255); // clamped
}

TEST(Jpeg, MatchesDirectOracle)
{
    const GrayImage img = test::random_image(32, 24, 4);
    for (int qf : {10, 50, 90})
        EXPECT_LT(compare(jpeg_attack(img, qf), naive_jpeg(img, qf), 1), 0.01);
}

TEST(Jpeg, NearLosslessAtHundred) { EXPECT_GT(psnr(test::desk_image("camera"), jpeg_attack(test::desk_image("camera"), 100)), 50.0); }

TEST(Jpeg, ConstantImage)
{
    const GrayImage flat(32, 32, 77);
    for (int qf : {5, 30, 60, 100}) {
        const GrayImage out = jpeg_attack(flat, qf);
        EXPECT_EQ(out, GrayImage(32, 32, out.at(0, 0))) << qf;
    }
    // Coarse DC steps move the level: at qf=5 the step is 160 and 77 lands on 68.
    EXPECT_EQ(jpeg_attack(flat, 5).at(0, 0), 68);
    for (int qf : {30, 60, 100})
        EXPECT_GT(psnr(flat, jpeg_attack(flat, qf)), 40.0);
}

TEST(Jpeg, Errors)
{
    EXPECT_THROW(jpeg_attack(GrayImage(16, 16), 0), ParameterError);
    EXPECT_THROW(jpeg_attack(GrayImage(16, 16), 101), ParameterError);
    EXPECT_THROW(jpeg_attack(GrayImage(12, 16), 50), DimensionError);
}

TEST(Filters, ConstantUnchanged)
{
    const GrayImage flat(20, 17, 93);
    EXPECT_EQ(average_filter(flat, 5), flat);
    EXPECT_EQ(median_filter(flat, 5), flat);
    EXPECT_EQ(gaussian_filter(flat, 7, 2.5), flat);
}

TEST(Filters, ImpulseAverage)
{
    GrayImage img(9, 9, 0);
    img.at(4, 4) = 255;
    const GrayImage out = average_filter(img, 3);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x)
            EXPECT_EQ(out.at(x, y), (std::abs(x - 4) <= 1 && std::abs(y - 4) <= 1) ? 28 : 0);
}

TEST(Filters, ImpulseMedianRemoved)
{
    GrayImage img(9, 9, 0);
    img.at(4, 4) = 255;
    EXPECT_EQ(median_filter(img, 3), GrayImage(9, 9, 0));
}

TEST(Filters, AverageMatchesOracle)
{
    const GrayImage img = test::random_image(23, 19, 11);
    for (int k : {3, 5, 9}) {
        GrayImage ref(img.width(), img.height());
        const int r = k / 2;
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                int s = 0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx)
                        s += clamp_at(img, x + dx, y + dy);
                ref.at(x, y) = round_pixel(static_cast<double>(s) / (k * k));
            }
        EXPECT_EQ(average_filter(img, k), ref) << "k=" << k;
    }
}

TEST(Filters, MedianMatchesOracle)
{
    const GrayImage img = test::random_image(23, 19, 12);
    for (int k : {3, 5, 9}) {
        GrayImage ref(img.width(), img.height());
        const int r = k / 2;
        std::vector<int> window;
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                window.clear();
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx)
                        window.push_back(clamp_at(img, x + dx, y + dy));
                std::nth_element(window.begin(), window.begin() + window.size() / 2, window.end());
                ref.at(x, y) = static_cast<std::uint8_t>(window[window.size() / 2]);
            }
        EXPECT_EQ(median_filter(img, k), ref) << "k=" << k;
    }
}

TEST(Filters, GaussianMatchesOracle)
{
    const GrayImage img = test::random_image(23, 19, 13);
    for (auto [k, sigma] : {std::pair{3, 0.5}, std::pair{5, 1.5}, std::pair{9, 3.5}}) {
        const int r = k / 2;
        double norm = 0.0;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx)
                norm += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        GrayImage ref(img.width(), img.height());
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                double s = 0.0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx)
                        s += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) * clamp_at(img, x + dx, y + dy);
                ref.at(x, y) = round_pixel(s / norm);
            }
        EXPECT_LT(compare(gaussian_filter(img, k, sigma), ref, 1), 0.01) << "k=" << k;
    }
}

TEST(Filters, ShiftEquivariantInterior)
{
    const GrayImage img = test::random_image(40, 40, 14);
    GrayImage shifted(40, 40);
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x)
            shifted.at(x, y) = clamp_at(img, x + 3, y + 2);
    for (const AttackSpec& spec : {AttackSpec{AverageFilter{5}}, AttackSpec{MedianFilter{5}}, AttackSpec{GaussianFilter{5, 1.5}}}) {
        const GrayImage a = attacks::apply(img, spec);
        const GrayImage b = attacks::apply(shifted, spec);
        for (int y = 4; y < 30; ++y)
            for (int x = 4; x < 30; ++x)
                ASSERT_EQ(b.at(x, y), a.at(x + 3, y + 2)) << to_string(spec);
    }
}

TEST(Filters, EvenKernelRejected)
{
    const GrayImage img(8, 8);
    EXPECT_THROW(average_filter(img, 4), ParameterError);
    EXPECT_THROW(median_filter(img, 2), ParameterError);
    EXPECT_THROW(gaussian_filter(img, 6, 1.0), ParameterError);
    EXPECT_THROW(gaussian_filter(img, 5, 0.0), ParameterError);
}

TEST(Noise, GaussianZeroVarianceIsIdentity)
{
    const GrayImage img = test::random_image(16, 16, 1);
    EXPECT_EQ(gaussian_noise(img, 0.0, 9), img);
}

TEST(Noise, GaussianSeeded)
{
    const GrayImage img(64, 64, 128);
    const GrayImage a = gaussian_noise(img, 1e-3, 7);
    EXPECT_EQ(a, gaussian_noise(img, 1e-3, 7));
    EXPECT_NE(a, gaussian_noise(img, 1e-3, 8));
    // Sample spread matches 255 * sqrt(var) within a few percent.
    double s = 0.0, ss = 0.0;
    for (auto v : a.values()) {
        s += v - 128.0;
        ss += (v - 128.0) * (v - 128.0);
    }
    const double n = static_cast<double>(a.size());
    const double sd = std::sqrt(ss / n - (s / n) * (s / n));
    EXPECT_NEAR(sd, 255.0 * std::sqrt(1e-3), 0.5);
    EXPECT_NEAR(s / n, 0.0, 0.3);
}

TEST(Noise, GaussianNegativeVariance) { EXPECT_THROW(gaussian_noise(GrayImage(8, 8), -1e-3, 1), ParameterError); }

TEST(Noise, SaltPepperCounts)
{
    const GrayImage img(50, 40, 128);
    const GrayImage out = salt_pepper(img, 1.0, 3);
    const auto salt = std::count(out.values().begin(), out.values().end(), 255);
    const auto pepper = std::count(out.values().begin(), out.values().end(), 0);
    EXPECT_EQ(salt + pepper, 20);
    EXPECT_EQ(salt, 10);

    const GrayImage odd = salt_pepper(img, 0.15, 3); // 3 positions
    EXPECT_EQ(std::count(odd.values().begin(), odd.values().end(), 255), 1);
    EXPECT_EQ(std::count(odd.values().begin(), odd.values().end(), 0), 2);
}

TEST(Noise, SaltPepperExtremes)
{
    const GrayImage img = test::random_image(16, 16, 2);
    EXPECT_EQ(salt_pepper(img, 0.0, 1), img);
    const GrayImage full = salt_pepper(img, 100.0, 1);
    for (auto v : full.values())
        EXPECT_TRUE(v == 0 || v == 255);
    EXPECT_THROW(salt_pepper(img, 100.5, 1), ParameterError);
    EXPECT_THROW(salt_pepper(img, -1.0, 1), ParameterError);
}

TEST(Noise, SaltPepperSeeded)
{
    const GrayImage img(64, 64, 128);
    EXPECT_EQ(salt_pepper(img, 5.0, 1), salt_pepper(img, 5.0, 1));
    EXPECT_NE(salt_pepper(img, 5.0, 1), salt_pepper(img, 5.0, 2));
}

TEST(Resize, IdentityAtOne)
{
    const GrayImage img = test::random_image(32, 24, 3);
    EXPECT_EQ(resize_attack(img, 1.0), img);
    EXPECT_EQ(resample_bilinear(img, 32, 24), img);
}

TEST(Resize, Errors)
{
    const GrayImage img(16, 16);
    EXPECT_THROW(resize_attack(img, 0.0), ParameterError);
    EXPECT_THROW(resize_attack(img, 1.5), ParameterError);
    EXPECT_THROW(resample_bilinear(img, 0, 4), DimensionError);
}

TEST(Resize, HalfOfCheckerboardAverages)
{
    GrayImage img(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            img.at(x, y) = ((x + y) % 2) ? 200 : 100;
    // Pixel-centre alignment samples the midpoint of each 2x2 cell.
    EXPECT_EQ(resample_bilinear(img, 2, 2), GrayImage(2, 2, 150));
}

TEST(Attacks, PreserveDimensions)
{
    const GrayImage img = test::desk_image("coins");
    for (const char* text : {"jpeg:qf=30", "avg:k=9", "median:k=5", "gauss:k=7,sigma=2.5", "gnoise:var=1e-3,seed=7",
                             "spnoise:pct=1,seed=7", "resize:f=0.4"}) {
        const GrayImage out = attacks::apply(img, parse(text));
        EXPECT_TRUE(out.same_shape(img)) << text;
        EXPECT_EQ(out, attacks::apply(img, parse(text))) << text;
    }
}

TEST(Parse, RoundTripsCanonicalText)
{
    for (const char* text : {"jpeg:qf=30", "avg:k=9", "median:k=5", "gauss:k=7,sigma=2.5", "gnoise:var=0.001,seed=7",
                             "spnoise:pct=1,seed=7", "resize:f=0.4"}) {
        const AttackSpec spec = parse(text);
        EXPECT_EQ(to_string(spec), text);
        EXPECT_EQ(to_string(parse(to_string(spec))), to_string(spec));
    }
}

TEST(Parse, Fields)
{
    const AttackSpec g = parse("gauss:k=7,sigma=2.5");
    ASSERT_TRUE(std::holds_alternative<GaussianFilter>(g));
    EXPECT_EQ(std::get<GaussianFilter>(g).k, 7);
    EXPECT_EQ(std::get<GaussianFilter>(g).sigma, 2.5);
    EXPECT_EQ(kind_name(g), "gauss");
    EXPECT_EQ(params_string(g), "k=7,sigma=2.5");
    EXPECT_EQ(std::get<GaussianNoise>(parse("gnoise:var=1e-3", 42)).seed, 42u);
    EXPECT_EQ(std::get<SaltPepper>(parse("spnoise:pct=2,seed=5", 42)).seed, 5u);
}

TEST(Parse, Rejects)
{
    for (const char* text : {"", "jpeg", "jpeg:qf=0", "jpeg:qf=101", "jpeg:q=5", "avg:k=4", "median:k=x", "blur:k=3",
                             "gauss:k=5", "gnoise:var=-1,seed=1", "spnoise:pct=1", "resize:f=0", "resize:f=2",
                             "avg:k=3,k=5"})
        EXPECT_THROW(parse(text), ParameterError) << text;
}

} // namespace
} // namespace dpwm::attacks
