#include "dpwm/watermark.hpp"

#include <cmath>
#include <string>

#include "dpwm/dct.hpp"
#include "dpwm/layer.hpp"
#include "dpwm/metrics.hpp"
#include "dpwm/parallel.hpp"
#include "dpwm/partition.hpp"
#include "dpwm/qim.hpp"

namespace dpwm::watermark {

namespace {

void check_cover(const GrayImage& img, int multiple)
{
    if (img.empty() || img.width() % multiple != 0 || img.height() % multiple != 0)
        throw DimensionError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " is not a multiple of " + std::to_string(multiple));
}

void check_logo(const GrayImage& cover, const BitPlane& logo)
{
    if (logo.width() * 8 != cover.width() || logo.height() * 8 != cover.height())
        throw DimensionError("logo must be " + std::to_string(cover.width() / 8) + "x" +
                             std::to_string(cover.height() / 8) + " for this cover, got " +
                             std::to_string(logo.width()) + "x" + std::to_string(logo.height()));
}

double mid_band_delta(const CoeffBlock& x) { return x(1, 3) - x(3, 1); }

// Moves x(1,3) - x(3,1) to `target`, splitting the correction evenly.
void set_mid_band_delta(CoeffBlock& x, double target)
{
    const double correction = target - mid_band_delta(x);
    x(1, 3) += correction / 2.0;
    x(3, 1) -= correction / 2.0;
}

SubBlocks read_subblocks(const GrayImage& img, int x0, int y0)
{
    SubBlocks s;
    s.a = dct2(read_block(img, x0, y0, 8));
    s.b = dct2(read_block(img, x0 + 8, y0, 8));
    s.c = dct2(read_block(img, x0, y0 + 8, 8));
    s.d = dct2(read_block(img, x0 + 8, y0 + 8, 8));
    return s;
}

} // namespace

Embedded embed_dp(const GrayImage& cover, const BitPlane& logo, const DpParams& params)
{
    check_cover(cover, 16);
    check_logo(cover, logo);
    const qim::BinaryLattice base_lattice(params.m);
    const qim::TernaryLattice enh_lattice(params.n);

    const partition::Partitioned parts = partition::split_spatial(logo);
    const auto& base = std::get<BitPlane>(parts.base);
    const auto& enh = std::get<TernaryPlane>(parts.enhancement);

    GrayImage out = cover;
    const int cols = cover.width() / 16;
    const int rows = cover.height() / 16;
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t by_index) {
        const int by = static_cast<int>(by_index);
        for (int bx = 0; bx < cols; ++bx) {
            SubBlocks sub = read_subblocks(cover, bx * 16, by * 16);
            auto quads = sub.all();
            for (int q = 0; q < 4; ++q) {
                const int symbol = enh.at(2 * bx + q % 2, 2 * by + q / 2);
                CoeffBlock& x = *quads[static_cast<std::size_t>(q)];
                set_mid_band_delta(x, enh_lattice.embed(mid_band_delta(x), symbol));
            }
            CoeffBlock layer = subblocks_to_layer16(sub);
            set_mid_band_delta(layer, base_lattice.embed(mid_band_delta(layer), base.at(bx, by)));
            write_block(out, bx * 16, by * 16, idct2(layer));
        }
    });

    EmbedReport report;
    report.psnr_db = psnr(cover, out);
    report.blocks_used = rows * cols;
    report.base_bits = static_cast<int>(base.size());
    report.enhancement_symbols = static_cast<int>(enh.size());
    report.capacity_bits = report.base_bits + report.enhancement_symbols;
    report.logo_width = logo.width();
    report.logo_height = logo.height();
    return {std::move(out), report};
}

DpParts extract_dp_parts(const GrayImage& img, const DpParams& params)
{
    check_cover(img, 16);
    const qim::BinaryLattice base_lattice(params.m);
    const qim::TernaryLattice enh_lattice(params.n);
    const int cols = img.width() / 16;
    const int rows = img.height() / 16;
    DpParts parts{BitPlane(cols, rows), TernaryPlane(cols * 2, rows * 2)};
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t by_index) {
        const int by = static_cast<int>(by_index);
        for (int bx = 0; bx < cols; ++bx) {
            const SubBlocks sub = read_subblocks(img, bx * 16, by * 16);
            const auto quads = sub.all();
            for (int q = 0; q < 4; ++q)
                parts.enhancement.at(2 * bx + q % 2, 2 * by + q / 2) = static_cast<std::int8_t>(
                    enh_lattice.extract(mid_band_delta(*quads[static_cast<std::size_t>(q)])));
            const CoeffBlock layer = dct2(read_block(img, bx * 16, by * 16, 16));
            parts.base.at(bx, by) = static_cast<std::uint8_t>(base_lattice.extract(mid_band_delta(layer)));
        }
    });
    return parts;
}

BitPlane extract_dp(const GrayImage& img, const DpParams& params)
{
    const DpParts parts = extract_dp_parts(img, params);
    return partition::combine_spatial(parts.base, parts.enhancement);
}

Embedded embed_normal(const GrayImage& cover, const BitPlane& logo, const NormalParams& params)
{
    check_cover(cover, 8);
    check_logo(cover, logo);
    const qim::BinaryLattice lattice(params.m);
    GrayImage out = cover;
    const int cols = cover.width() / 8;
    const int rows = cover.height() / 8;
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t by_index) {
        const int by = static_cast<int>(by_index);
        for (int bx = 0; bx < cols; ++bx) {
            CoeffBlock x = dct2(read_block(cover, bx * 8, by * 8, 8));
            set_mid_band_delta(x, lattice.embed(mid_band_delta(x), logo.at(bx, by)));
            write_block(out, bx * 8, by * 8, idct2(x));
        }
    });

    EmbedReport report;
    report.psnr_db = psnr(cover, out);
    report.blocks_used = rows * cols;
    report.base_bits = rows * cols;
    report.capacity_bits = rows * cols;
    report.logo_width = logo.width();
    report.logo_height = logo.height();
    return {std::move(out), report};
}

BitPlane extract_normal(const GrayImage& img, const NormalParams& params)
{
    check_cover(img, 8);
    const qim::BinaryLattice lattice(params.m);
    const int cols = img.width() / 8;
    const int rows = img.height() / 8;
    BitPlane logo(cols, rows);
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t by_index) {
        const int by = static_cast<int>(by_index);
        for (int bx = 0; bx < cols; ++bx)
            logo.at(bx, by) = static_cast<std::uint8_t>(
                lattice.extract(mid_band_delta(dct2(read_block(img, bx * 8, by * 8, 8)))));
    });
    return logo;
}

Calibration calibrate(std::span<const GrayImage> covers, const BitPlane& logo, double target_psnr, Method method,
                      double ratio)
{
    if (covers.empty())
        throw ParameterError("calibration needs at least one cover image");
    if (method == Method::dp && !(ratio > 0.0))
        throw ParameterError("N/M ratio must be positive");

    int evaluations = 0;
    auto mean_psnr = [&](double strength) {
        ++evaluations;
        double sum = 0.0;
        for (const GrayImage& cover : covers) {
            sum += method == Method::dp ? embed_dp(cover, logo, {strength, strength * ratio}).report.psnr_db
                                        : embed_normal(cover, logo, {strength}).report.psnr_db;
        }
        return sum / static_cast<double>(covers.size());
    };
    auto done = [&](double strength, double psnr_db) {
        return Calibration{strength, method == Method::dp ? strength * ratio : 0.0, psnr_db, evaluations};
    };

    double lo = min_strength;
    double hi = max_strength;
    double psnr_lo = mean_psnr(lo);
    double psnr_hi = mean_psnr(hi);
    if (std::abs(psnr_lo - target_psnr) < calibration_tolerance_db)
        return done(lo, psnr_lo);
    if (std::abs(psnr_hi - target_psnr) < calibration_tolerance_db)
        return done(hi, psnr_hi);
    if (!(psnr_lo > target_psnr && target_psnr > psnr_hi))
        throw CalibrationError("target PSNR " + format_db(target_psnr) + " dB outside the reachable range [" +
                                   format_db(psnr_hi) + ", " + format_db(psnr_lo) + "] dB for strength in [" +
                                   format_db(lo) + ", " + format_db(hi) + "]",
                               lo, psnr_lo, hi, psnr_hi);

    // PSNR falls as strength grows.
    for (int iter = 0; iter < 64; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double psnr_mid = mean_psnr(mid);
        if (std::abs(psnr_mid - target_psnr) < calibration_tolerance_db)
            return done(mid, psnr_mid);
        if (psnr_mid > target_psnr) {
            lo = mid;
            psnr_lo = psnr_mid;
        } else {
            hi = mid;
            psnr_hi = psnr_mid;
        }
    }
    throw CalibrationError("PSNR is not continuous enough near the target to reach " +
                               format_db(calibration_tolerance_db) + " dB tolerance",
                           lo, psnr_lo, hi, psnr_hi);
}

} // namespace dpwm::watermark
