#pragma once

// Blind logo watermarking in the block DCT domain.
//
// Two-layer scheme: the logo is split into a half-resolution base plane and a
// ternary enhancement plane. Each 16x16 cover block carries one base bit in
// the 16x16-layer difference A(1,3) - A(3,1) (binary lattice, step M) and four
// enhancement symbols, one per 8x8 sub-block, in x(1,3) - x(3,1) (ternary
// lattice, step N). The base coefficients only touch x(1,2) and x(2,1) of the
// sub-blocks, so the two layers do not interfere.
//
// The single-layer scheme puts one logo bit per 8x8 block in x(1,3) - x(3,1).

#include <span>

#include "dpwm/image.hpp"

namespace dpwm::watermark {

struct DpParams {
    double m = 69.1; ///< base strength
    double n = 12.0; ///< enhancement strength
};

struct NormalParams {
    double m = 62.2;
};

enum class Method { dp, normal };

/// Default N/M ratio for calibrating the two-layer scheme.
inline constexpr double default_dp_ratio = 12.0 / 69.1;

struct EmbedReport {
    double psnr_db = 0.0;    ///< watermarked vs cover
    int blocks_used = 0;     ///< 16x16 blocks (dp) or 8x8 blocks (normal)
    int base_bits = 0;       ///< binary symbols embedded
    int enhancement_symbols = 0;
    int capacity_bits = 0;   ///< total embedded symbols
    int logo_width = 0;
    int logo_height = 0;

    int logo_bits() const noexcept { return logo_width * logo_height; }
};

struct Embedded {
    GrayImage image;
    EmbedReport report;
};

/// Parts recovered by the two-layer decoder before recombination.
struct DpParts {
    BitPlane base;
    TernaryPlane enhancement;
};

/// Cover dimensions must be multiples of 16 and the logo exactly
/// (width/8, height/8).
Embedded embed_dp(const GrayImage& cover, const BitPlane& logo, const DpParams& params);
DpParts extract_dp_parts(const GrayImage& img, const DpParams& params);
BitPlane extract_dp(const GrayImage& img, const DpParams& params);

Embedded embed_normal(const GrayImage& cover, const BitPlane& logo, const NormalParams& params);
BitPlane extract_normal(const GrayImage& img, const NormalParams& params);

class CalibrationError : public Error {
public:
    CalibrationError(const std::string& what, double lo_strength, double lo_psnr, double hi_strength,
                     double hi_psnr)
        : Error(what), lo_strength(lo_strength), lo_psnr(lo_psnr), hi_strength(hi_strength), hi_psnr(hi_psnr)
    {
    }

    double lo_strength;
    double lo_psnr;
    double hi_strength;
    double hi_psnr;
};

struct Calibration {
    double m = 0.0;
    double n = 0.0; ///< zero for the single-layer scheme
    double mean_psnr = 0.0;
    int evaluations = 0;
};

inline constexpr double calibration_tolerance_db = 0.05;
inline constexpr double min_strength = 1.0;
inline constexpr double max_strength = 512.0;

/// Bisection on M (N = ratio * M for dp) until the mean PSNR over the covers
/// is within 0.05 dB of the target. Strength is bracketed by [1, 512].
Calibration calibrate(std::span<const GrayImage> covers, const BitPlane& logo, double target_psnr, Method method,
                      double ratio = default_dp_ratio);

} // namespace dpwm::watermark
