#pragma once

// Experiment runner: embed -> attack -> extract -> BER over an image set,
// with CSV and markdown report emitters.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dpwm/attacks.hpp"
#include "dpwm/image.hpp"
#include "dpwm/watermark.hpp"

namespace dpwm::bench {

struct BenchConfig {
    std::filesystem::path image_dir;
    std::filesystem::path logo_path;
    std::vector<watermark::Method> methods{watermark::Method::dp, watermark::Method::normal};
    watermark::DpParams dp;
    watermark::NormalParams normal;
    std::vector<attacks::AttackSpec> attacks;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> out_csv;
    std::optional<std::filesystem::path> out_md;
    std::optional<std::filesystem::path> out_curve;
};

/// `key = value` lines; '#' starts a comment. Keys: images, logo, methods,
/// dp.M, dp.N, normal.M, attacks, seed, out_csv, out_md, out_curve. The
/// attack list is comma separated; a `key=value` item without a kind prefix
/// continues the previous spec, so `gauss:k=7,sigma=2.5` stays one spec.
/// Stochastic attacks without seed= take the config seed; `seed_override`
/// replaces the file's seed before the attack list is resolved.
BenchConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override = std::nullopt);
BenchConfig load_config(const std::filesystem::path& path,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

/// Splits an attack list as described for parse_config.
std::vector<attacks::AttackSpec> parse_attack_list(std::string_view text, std::uint64_t default_seed);

std::string method_name(watermark::Method m);
watermark::Method parse_method(std::string_view name);

struct BenchRecord {
    std::string image;
    watermark::Method method = watermark::Method::dp;
    std::string attack;  ///< kind tag, "none" for the no-attack record
    std::string params;
    int attack_index = 0; ///< 0 = none, i+1 = i-th grid entry
    double ber_percent = 0.0;
    double psnr_embed_db = 0.0;  ///< watermarked vs cover
    double psnr_attack_db = 0.0; ///< attacked vs watermarked
    std::uint64_t seed = 0;
};

struct NamedImage {
    std::string id;
    GrayImage image;
};

struct SuiteResult {
    std::vector<BenchRecord> records; ///< sorted by (image, attack, method)
    std::vector<std::string> skipped; ///< per-file problems; the suite continues
};

/// One no-attack record plus one record per grid attack, for every
/// (image, method) pair.
SuiteResult run_suite(const std::vector<NamedImage>& images, const BitPlane& logo, const BenchConfig& config);

/// Loads every *.pgm under config.image_dir (sorted by name) and the logo
/// (binarised at 128), then runs the suite.
SuiteResult run_suite(const BenchConfig& config);

/// Mean and spread over images for one (method, attack) cell.
struct Summary {
    watermark::Method method = watermark::Method::dp;
    std::string attack;
    std::string params;
    int attack_index = 0;
    std::size_t images = 0;
    double mean_ber = 0.0;
    double std_ber = 0.0;
    double min_ber = 0.0;
    double max_ber = 0.0;
    double mean_psnr_embed = 0.0;
};

std::vector<Summary> summarize(const std::vector<BenchRecord>& records);

const Summary* find_summary(const std::vector<Summary>& summaries, watermark::Method method,
                            std::string_view attack_text);

inline constexpr std::string_view csv_header =
    "image,method,attack,params,ber_percent,psnr_embed_db,psnr_attack_db,seed";

std::string emit_csv(const std::vector<BenchRecord>& records);
std::string emit_markdown(const std::vector<BenchRecord>& records);
/// qf,method,mean_ber rows for the JPEG entries.
std::string emit_jpeg_curve_csv(const std::vector<BenchRecord>& records);

} // namespace dpwm::bench
