#include "dpwm/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dpwm/attacks.hpp"
#include "dpwm/bench.hpp"
#include "dpwm/metrics.hpp"
#include "dpwm/partition.hpp"
#include "dpwm/pgm.hpp"
#include "dpwm/watermark.hpp"

namespace dpwm::cli {

namespace {

using watermark::Method;

struct StrengthFlags {
    std::string method = "dp";
    std::optional<double> m;
    std::optional<double> n;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--method", method, "dp or normal")->check(CLI::IsMember({"dp", "normal"}));
        cmd.add_option("--M", m, "base / single-layer strength (default 69.1 dp, 62.2 normal)");
        cmd.add_option("--N", n, "enhancement strength (dp only, default 12)");
    }

    Method kind() const { return bench::parse_method(method); }
    watermark::DpParams dp() const { return {m.value_or(watermark::DpParams{}.m), n.value_or(watermark::DpParams{}.n)}; }
    watermark::NormalParams normal() const { return {m.value_or(watermark::NormalParams{}.m)}; }
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write " + path);
    f << text;
    if (!f)
        throw Error("short write to " + path);
}

BitPlane read_logo(const std::string& path) { return binarize(read_pgm_file(path), 128); }

std::vector<GrayImage> read_covers(const std::string& dir)
{
    std::vector<std::filesystem::path> paths;
    if (!std::filesystem::is_directory(dir))
        throw Error("cover directory " + dir + " not found");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pgm")
            paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
        throw Error("no .pgm covers in " + dir);
    std::vector<GrayImage> covers;
    for (const auto& p : paths)
        covers.push_back(read_pgm_file(p));
    return covers;
}

std::string describe_partition(const std::string& name, const partition::Method& method, const BitPlane& logo)
{
    const partition::Partitioned parts = partition::split(logo, method);
    const bool reversible = partition::reconstruct(parts) == logo;
    const partition::Propagation prop = partition::error_propagation(method, logo);
    return fmt::format("{:<20} alphabet=({},{}) reversible={} propagation_enh={:.4f} propagation_base={:.4f} "
                       "propagation_all={:.4f}\n",
                       name, parts.alphabet_size_base, parts.alphabet_size_enh, reversible ? "pass" : "FAIL",
                       prop.enhancement_mean, prop.base_mean, prop.overall_mean);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Blind two-layer DCT logo watermarking with data partitioning"};
    app.require_subcommand(1);

    // embed
    auto* embed = app.add_subcommand("embed", "embed a logo into a cover image");
    std::string cover_path, logo_path, out_path, report_path;
    StrengthFlags embed_strength;
    embed->add_option("--cover", cover_path)->required();
    embed->add_option("--logo", logo_path)->required();
    embed->add_option("--out", out_path)->required();
    embed->add_option("--report", report_path, "JSON embed report");
    embed_strength.add_to(*embed);

    // extract
    auto* extract = app.add_subcommand("extract", "extract the logo from a watermarked image");
    std::string image_path, truth_path;
    StrengthFlags extract_strength;
    extract->add_option("--image", image_path)->required();
    extract->add_option("--out", out_path)->required();
    extract->add_option("--truth", truth_path, "original logo; prints BER");
    extract_strength.add_to(*extract);

    // attack
    auto* attack = app.add_subcommand("attack", "apply one attack");
    std::string attack_spec;
    std::uint64_t attack_seed = 1;
    attack->add_option("--image", image_path)->required();
    attack->add_option("--attack", attack_spec, "e.g. jpeg:qf=30, gauss:k=7,sigma=2.5, spnoise:pct=1")->required();
    attack->add_option("--out", out_path)->required();
    attack->add_option("--seed", attack_seed, "seed for stochastic attacks without seed=");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "find the strength that reaches a mean PSNR");
    std::string covers_dir;
    std::string calib_method = "dp";
    double target_psnr = 0.0;
    double ratio = watermark::default_dp_ratio;
    calibrate->add_option("--covers", covers_dir)->required();
    calibrate->add_option("--logo", logo_path)->required();
    calibrate->add_option("--method", calib_method)->check(CLI::IsMember({"dp", "normal"}));
    calibrate->add_option("--target-psnr", target_psnr)->required();
    calibrate->add_option("--ratio", ratio, "N/M ratio for dp");

    // partition-analyze
    auto* analyze = app.add_subcommand("partition-analyze", "compare the logo partitioning methods");
    int svd_rank = 5;
    analyze->add_option("--logo", logo_path)->required();
    analyze->add_option("--svd-rank", svd_rank);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run the robustness suite");
    std::string config_path, out_csv, out_md, out_curve;
    std::optional<std::uint64_t> bench_seed;
    bench_cmd->add_option("--config", config_path)->required();
    bench_cmd->add_option("--out-csv", out_csv);
    bench_cmd->add_option("--out-md", out_md);
    bench_cmd->add_option("--out-curve", out_curve, "qf,method,mean_ber for the JPEG entries");
    bench_cmd->add_option("--seed", bench_seed, "overrides the config seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, err, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*embed) {
            const GrayImage cover = read_pgm_file(cover_path);
            const BitPlane logo = read_logo(logo_path);
            const bool dp = embed_strength.kind() == Method::dp;
            const watermark::Embedded result = dp ? watermark::embed_dp(cover, logo, embed_strength.dp())
                                                  : watermark::embed_normal(cover, logo, embed_strength.normal());
            write_pgm_file(out_path, result.image);
            out << "psnr_db=" << format_db(result.report.psnr_db) << '\n';
            if (!report_path.empty()) {
                nlohmann::json j = {
                    {"method", embed_strength.method},
                    {"M", dp ? embed_strength.dp().m : embed_strength.normal().m},
                    {"psnr_db", format_db(result.report.psnr_db)},
                    {"blocks_used", result.report.blocks_used},
                    {"base_bits", result.report.base_bits},
                    {"enhancement_symbols", result.report.enhancement_symbols},
                    {"capacity_bits", result.report.capacity_bits},
                    {"logo_width", result.report.logo_width},
                    {"logo_height", result.report.logo_height},
                };
                if (dp)
                    j["N"] = embed_strength.dp().n;
                write_text(report_path, j.dump(2) + "\n");
            }
            err << "wrote " << out_path << '\n';
        } else if (*extract) {
            const GrayImage img = read_pgm_file(image_path);
            const BitPlane logo = extract_strength.kind() == Method::dp
                                      ? watermark::extract_dp(img, extract_strength.dp())
                                      : watermark::extract_normal(img, extract_strength.normal());
            write_pgm_file(out_path, to_image(logo));
            if (!truth_path.empty())
                out << fmt::format("ber_percent={:.2f}\n", ber(read_logo(truth_path), logo));
            err << "wrote " << out_path << '\n';
        } else if (*attack) {
            const GrayImage img = read_pgm_file(image_path);
            const attacks::AttackSpec spec = attacks::parse(attack_spec, attack_seed);
            const GrayImage attacked = attacks::apply(img, spec);
            write_pgm_file(out_path, attacked);
            out << "attack=" << attacks::to_string(spec) << " psnr_db=" << format_db(psnr(img, attacked)) << '\n';
        } else if (*calibrate) {
            const std::vector<GrayImage> covers = read_covers(covers_dir);
            const BitPlane logo = read_logo(logo_path);
            const Method method = bench::parse_method(calib_method);
            const watermark::Calibration c = watermark::calibrate(covers, logo, target_psnr, method, ratio);
            if (method == Method::dp)
                out << fmt::format("M={:.4f} N={:.4f} mean_psnr_db={:.2f}\n", c.m, c.n, c.mean_psnr);
            else
                out << fmt::format("M={:.4f} mean_psnr_db={:.2f}\n", c.m, c.mean_psnr);
        } else if (*analyze) {
            const BitPlane logo = read_logo(logo_path);
            out << describe_partition("spatial", partition::SpatialScalability{}, logo);
            out << describe_partition("binary-wavelet", partition::BinaryWavelet{}, logo);
            out << describe_partition(fmt::format("svd(rank={})", svd_rank), partition::TruncatedSvd{svd_rank},
                                      logo);
            try {
                partition::BinaryWaveletMatrix printed(partition::BinaryWaveletMatrix::printed());
                out << "printed-wavelet-matrix accepted\n";
            } catch (const partition::SingularMatrixError& e) {
                out << "printed-wavelet-matrix rejected det=" << e.determinant() << '\n';
            }
        } else if (*bench_cmd) {
            bench::BenchConfig config = bench::load_config(config_path, bench_seed);
            if (!out_csv.empty())
                config.out_csv = out_csv;
            if (!out_md.empty())
                config.out_md = out_md;
            if (!out_curve.empty())
                config.out_curve = out_curve;

            const bench::SuiteResult result = bench::run_suite(config);
            for (const auto& s : result.skipped)
                err << "skipped: " << s << '\n';
            const std::string csv = bench::emit_csv(result.records);
            if (config.out_csv)
                write_text(config.out_csv->string(), csv);
            else
                out << csv;
            if (config.out_md)
                write_text(config.out_md->string(), bench::emit_markdown(result.records));
            if (config.out_curve)
                write_text(config.out_curve->string(), bench::emit_jpeg_curve_csv(result.records));
            err << result.records.size() << " records\n";
        }
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_ok;
}

} // namespace dpwm::cli
