#include "dpwm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "dpwm/metrics.hpp"
#include "dpwm/parallel.hpp"
#include "dpwm/pgm.hpp"

namespace dpwm::bench {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParameterError(fmt::format("config: bad value '{}' for '{}'", text, key));
    return v;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

double mean_of(const std::vector<double>& v)
{
    double sum = 0.0;
    for (double x : v)
        sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

std::vector<BenchRecord> records_for(const NamedImage& cover, const BitPlane& logo, const BenchConfig& config)
{
    std::vector<BenchRecord> out;
    for (const watermark::Method method : config.methods) {
        const bool dp = method == watermark::Method::dp;
        const watermark::Embedded emb = dp ? watermark::embed_dp(cover.image, logo, config.dp)
                                           : watermark::embed_normal(cover.image, logo, config.normal);
        auto extract = [&](const GrayImage& img) {
            return dp ? watermark::extract_dp(img, config.dp) : watermark::extract_normal(img, config.normal);
        };

        BenchRecord clean;
        clean.image = cover.id;
        clean.method = method;
        clean.attack = "none";
        clean.ber_percent = ber(logo, extract(emb.image));
        clean.psnr_embed_db = emb.report.psnr_db;
        clean.psnr_attack_db = std::numeric_limits<double>::infinity();
        clean.seed = config.seed;
        out.push_back(clean);

        for (std::size_t i = 0; i < config.attacks.size(); ++i) {
            const attacks::AttackSpec& spec = config.attacks[i];
            const GrayImage attacked = attacks::apply(emb.image, spec);
            BenchRecord r;
            r.image = cover.id;
            r.method = method;
            r.attack = attacks::kind_name(spec);
            r.params = attacks::params_string(spec);
            r.attack_index = static_cast<int>(i) + 1;
            r.ber_percent = ber(logo, extract(attacked));
            r.psnr_embed_db = emb.report.psnr_db;
            r.psnr_attack_db = psnr(emb.image, attacked);
            r.seed = std::visit(
                [&](const auto& a) -> std::uint64_t {
                    if constexpr (requires { a.seed; })
                        return a.seed;
                    else
                        return config.seed;
                },
                spec);
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace

std::string method_name(watermark::Method m) { return m == watermark::Method::dp ? "dp" : "normal"; }

watermark::Method parse_method(std::string_view name)
{
    name = trim(name);
    if (name == "dp")
        return watermark::Method::dp;
    if (name == "normal")
        return watermark::Method::normal;
    throw ParameterError(fmt::format("unknown method '{}' (dp or normal)", name));
}

std::vector<attacks::AttackSpec> parse_attack_list(std::string_view text, std::uint64_t default_seed)
{
    std::vector<std::string> specs;
    for (std::size_t start = 0; start <= text.size();) {
        std::size_t end = text.find_first_of(",;", start);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view item = trim(text.substr(start, end - start));
        if (!item.empty()) {
            const bool continuation = item.find(':') == std::string_view::npos &&
                                      item.find('=') != std::string_view::npos && !specs.empty() &&
                                      text[start - 1] == ',';
            if (continuation)
                specs.back() += "," + std::string(item);
            else
                specs.emplace_back(item);
        }
        start = end + 1;
    }
    std::vector<attacks::AttackSpec> out;
    out.reserve(specs.size());
    for (const auto& s : specs)
        out.push_back(attacks::parse(s, default_seed));
    return out;
}

BenchConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override)
{
    BenchConfig config;
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ParameterError(fmt::format("config line {}: expected 'key = value'", lineno));
        kv[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
    }

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("seed"))
        config.seed = parse_number<std::uint64_t>("seed", *v);
    if (seed_override)
        config.seed = *seed_override;
    if (auto v = take("images"))
        config.image_dir = *v;
    if (auto v = take("logo"))
        config.logo_path = *v;
    if (auto v = take("methods")) {
        config.methods.clear();
        std::string_view rest = *v;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            config.methods.push_back(parse_method(rest.substr(0, comma)));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }
    if (auto v = take("dp.M"))
        config.dp.m = parse_number<double>("dp.M", *v);
    if (auto v = take("dp.N"))
        config.dp.n = parse_number<double>("dp.N", *v);
    if (auto v = take("normal.M"))
        config.normal.m = parse_number<double>("normal.M", *v);
    if (auto v = take("attacks"))
        config.attacks = parse_attack_list(*v, config.seed);
    if (auto v = take("out_csv"))
        config.out_csv = *v;
    if (auto v = take("out_md"))
        config.out_md = *v;
    if (auto v = take("out_curve"))
        config.out_curve = *v;
    if (!kv.empty())
        throw ParameterError(fmt::format("config: unknown key '{}'", kv.begin()->first));
    return config;
}

BenchConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    BenchConfig config = parse_config(buf.str(), seed_override);
    // Relative paths in the file are relative to the file.
    const auto base = path.parent_path();
    auto anchor = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative())
            p = base / p;
    };
    anchor(config.image_dir);
    anchor(config.logo_path);
    return config;
}

SuiteResult run_suite(const std::vector<NamedImage>& images, const BitPlane& logo, const BenchConfig& config)
{
    std::vector<std::vector<BenchRecord>> per_image(images.size());
    std::vector<std::string> problems(images.size());
    parallel_for(images.size(), [&](std::size_t i) {
        try {
            per_image[i] = records_for(images[i], logo, config);
        } catch (const Error& e) {
            problems[i] = images[i].id + ": " + e.what();
        }
    });

    SuiteResult result;
    for (auto& recs : per_image)
        for (auto& r : recs)
            result.records.push_back(std::move(r));
    for (auto& p : problems)
        if (!p.empty())
            result.skipped.push_back(std::move(p));
    std::stable_sort(result.records.begin(), result.records.end(), [](const BenchRecord& a, const BenchRecord& b) {
        return std::tie(a.image, a.attack_index, a.method) < std::tie(b.image, b.attack_index, b.method);
    });
    return result;
}

SuiteResult run_suite(const BenchConfig& config)
{
    const BitPlane logo = binarize(read_pgm_file(config.logo_path), 128);
    if (!std::filesystem::is_directory(config.image_dir))
        throw Error("image directory " + config.image_dir.string() + " not found");

    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(config.image_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());

    std::vector<NamedImage> images;
    std::vector<std::string> skipped;
    for (const auto& p : paths) {
        try {
            images.push_back({p.stem().string(), read_pgm_file(p)});
        } catch (const Error& e) {
            skipped.push_back(e.what());
        }
    }
    if (images.empty() && skipped.empty())
        throw Error("no .pgm images in " + config.image_dir.string());

    SuiteResult result = run_suite(images, logo, config);
    result.skipped.insert(result.skipped.begin(), skipped.begin(), skipped.end());
    return result;
}

std::vector<Summary> summarize(const std::vector<BenchRecord>& records)
{
    std::map<std::tuple<int, watermark::Method>, std::vector<const BenchRecord*>> cells;
    for (const auto& r : records)
        cells[{r.attack_index, r.method}].push_back(&r);

    std::vector<Summary> out;
    for (const auto& [key, rs] : cells) {
        Summary s;
        s.method = std::get<1>(key);
        s.attack_index = std::get<0>(key);
        s.attack = rs.front()->attack;
        s.params = rs.front()->params;
        s.images = rs.size();
        std::vector<double> bers;
        std::vector<double> psnrs;
        for (const BenchRecord* r : rs) {
            bers.push_back(r->ber_percent);
            psnrs.push_back(r->psnr_embed_db);
        }
        s.mean_ber = mean_of(bers);
        double var = 0.0;
        for (double b : bers)
            var += (b - s.mean_ber) * (b - s.mean_ber);
        s.std_ber = std::sqrt(var / static_cast<double>(bers.size()));
        s.min_ber = *std::min_element(bers.begin(), bers.end());
        s.max_ber = *std::max_element(bers.begin(), bers.end());
        s.mean_psnr_embed = mean_of(psnrs);
        out.push_back(std::move(s));
    }
    return out;
}

const Summary* find_summary(const std::vector<Summary>& summaries, watermark::Method method,
                            std::string_view attack_text)
{
    for (const auto& s : summaries) {
        const std::string label = s.attack == "none" ? "none" : s.attack + ":" + s.params;
        if (s.method == method && label == attack_text)
            return &s;
    }
    return nullptr;
}

std::string emit_csv(const std::vector<BenchRecord>& records)
{
    std::string out(csv_header);
    out += '\n';
    for (const auto& r : records) {
        out += fmt::format("{},{},{},{},{:.2f},{},{},{}\n", csv_field(r.image), method_name(r.method),
                           csv_field(r.attack), csv_field(r.params), r.ber_percent, format_db(r.psnr_embed_db),
                           format_db(r.psnr_attack_db), r.seed);
    }
    return out;
}

std::string emit_markdown(const std::vector<BenchRecord>& records)
{
    const std::vector<Summary> summaries = summarize(records);
    std::vector<watermark::Method> methods;
    for (const auto& s : summaries)
        if (std::find(methods.begin(), methods.end(), s.method) == methods.end())
            methods.push_back(s.method);
    std::sort(methods.begin(), methods.end());

    std::string out = "# Watermark robustness report\n\n";
    out += "BER in percent, mean ± standard deviation over images. ";
    out += "Gaussian noise `var` is the variance on a [0,1] intensity scale "
           "(noise standard deviation = 255·sqrt(var) grey levels). ";
    out += "The 3x3 Gaussian filter uses sigma 0.5 (the grid's \"10.5\" read as 0.5).\n";

    std::size_t image_count = 0;
    for (const auto& s : summaries)
        image_count = std::max(image_count, s.images);
    out += fmt::format("\nImages: {}\n", image_count);

    // Kinds in order of first appearance in the grid.
    std::vector<std::string> kinds;
    std::vector<int> indices;
    for (const auto& s : summaries)
        if (std::find(indices.begin(), indices.end(), s.attack_index) == indices.end())
            indices.push_back(s.attack_index);
    std::sort(indices.begin(), indices.end());
    for (int idx : indices)
        for (const auto& s : summaries)
            if (s.attack_index == idx && std::find(kinds.begin(), kinds.end(), s.attack) == kinds.end())
                kinds.push_back(s.attack);

    for (const std::string& kind : kinds) {
        out += fmt::format("\n## {}\n\n| {} |", kind, kind == "none" ? "metric" : "params");
        for (auto m : methods)
            out += " " + method_name(m) + " |";
        out += "\n|---|";
        for (std::size_t i = 0; i < methods.size(); ++i)
            out += "---|";
        out += '\n';

        auto cell = [&](int idx, watermark::Method m) -> const Summary* {
            for (const auto& s : summaries)
                if (s.attack_index == idx && s.method == m)
                    return &s;
            return nullptr;
        };
        if (kind == "none") {
            out += "| PSNR (dB) |";
            for (auto m : methods) {
                const Summary* s = cell(0, m);
                out += " " + (s ? format_db(s->mean_psnr_embed) : std::string("-")) + " |";
            }
            out += "\n| BER (no attack) |";
            for (auto m : methods) {
                const Summary* s = cell(0, m);
                out += " " + (s ? fmt::format("{:.2f} ± {:.2f}", s->mean_ber, s->std_ber) : std::string("-")) + " |";
            }
            out += '\n';
            continue;
        }
        for (int idx : indices) {
            const Summary* any = nullptr;
            for (auto m : methods)
                if ((any = cell(idx, m)) != nullptr)
                    break;
            if (any == nullptr || any->attack != kind)
                continue;
            out += "| " + any->params + " |";
            for (auto m : methods) {
                const Summary* s = cell(idx, m);
                out += " " + (s ? fmt::format("{:.2f} ± {:.2f}", s->mean_ber, s->std_ber) : std::string("-")) + " |";
            }
            out += '\n';
        }
    }
    return out;
}

std::string emit_jpeg_curve_csv(const std::vector<BenchRecord>& records)
{
    std::string out = "qf,method,mean_ber\n";
    for (const auto& s : summarize(records)) {
        if (s.attack != "jpeg")
            continue;
        out += fmt::format("{},{},{:.2f}\n", s.params.substr(3), method_name(s.method), s.mean_ber);
    }
    return out;
}

} // namespace dpwm::bench
