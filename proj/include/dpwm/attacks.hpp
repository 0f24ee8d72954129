#pragma once

// Deterministic signal-processing attacks applied to watermarked images.
//
// Stochastic attacks draw from std::mt19937_64 (fixed, published constants,
// identical output on every conforming standard library). Gaussian variates
// use Box-Muller and index draws use rejection sampling, both implemented here
// because the std distributions are implementation-defined.
//
// Gaussian noise is parameterised by its variance on a [0,1] intensity scale:
// the added noise has standard deviation 255 * sqrt(variance) grey levels.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dpwm/image.hpp"

namespace dpwm::attacks {

struct Jpeg {
    int qf;
};
struct AverageFilter {
    int k;
};
struct MedianFilter {
    int k;
};
struct GaussianFilter {
    int k;
    double sigma;
};
struct GaussianNoise {
    double variance;
    std::uint64_t seed;
};
struct SaltPepper {
    double percent;
    std::uint64_t seed;
};
struct Resize {
    double factor;
};

using AttackSpec = std::variant<Jpeg, AverageFilter, MedianFilter, GaussianFilter, GaussianNoise, SaltPepper, Resize>;

/// Parses `kind:key=value[,key=value]`: jpeg:qf=30, avg:k=9, median:k=5,
/// gauss:k=7,sigma=2.5, gnoise:var=1e-3,seed=7, spnoise:pct=1,seed=7,
/// resize:f=0.4. A stochastic spec without seed= takes `default_seed`, and
/// is rejected when there is none. Ranges are validated.
AttackSpec parse(std::string_view text, std::optional<std::uint64_t> default_seed = std::nullopt);

/// Short kind tag, e.g. "gauss".
std::string kind_name(const AttackSpec& spec);
/// Parameter list without the kind, e.g. "k=7,sigma=2.5".
std::string params_string(const AttackSpec& spec);
/// Canonical text accepted by parse().
std::string to_string(const AttackSpec& spec);

void validate(const AttackSpec& spec);

GrayImage apply(const GrayImage& img, const AttackSpec& spec);

/// Standard JPEG luminance quantisation table, raster order.
const std::array<int, 64>& standard_luma_table();
/// Table scaled for a quality factor with the IJG rule.
std::array<int, 64> scaled_luma_table(int qf);

/// Per 8x8 block: level shift, DCT, quantise, dequantise, inverse DCT.
GrayImage jpeg_attack(const GrayImage& img, int qf);
/// Filters use clamp-to-edge borders and need an odd k >= 3.
GrayImage average_filter(const GrayImage& img, int k);
GrayImage median_filter(const GrayImage& img, int k);
GrayImage gaussian_filter(const GrayImage& img, int k, double sigma);
GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed);
/// floor(percent/100 * pixels) distinct positions; half salt (255), the rest pepper (0).
GrayImage salt_pepper(const GrayImage& img, double percent, std::uint64_t seed);
/// Bilinear down to round(factor * size) and back up.
GrayImage resize_attack(const GrayImage& img, double factor);

/// Bilinear resampling with pixel-centre alignment.
GrayImage resample_bilinear(const GrayImage& img, int width, int height);

} // namespace dpwm::attacks
