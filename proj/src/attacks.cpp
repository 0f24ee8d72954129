#include "dpwm/attacks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <span>

#include <fmt/format.h>

#include "dpwm/dct.hpp"
#include "dpwm/kernels.hpp"

namespace dpwm::attacks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

class ParamList {
public:
    ParamList(std::string_view kind, std::string_view text) : kind_(kind)
    {
        while (!text.empty()) {
            const auto comma = text.find(',');
            const std::string_view item = trim(text.substr(0, comma));
            text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
            if (item.empty())
                continue;
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw ParameterError(fmt::format("attack '{}': parameter '{}' lacks '='", kind_, item));
            const auto [it, fresh] =
                values_.try_emplace(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
            if (!fresh)
                throw ParameterError(fmt::format("attack '{}': parameter '{}' given twice", kind_, it->first));
        }
    }

    template <typename T>
    T get(const std::string& key)
    {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ParameterError(fmt::format("attack '{}': missing parameter '{}'", kind_, key));
        const T v = convert<T>(key, it->second);
        values_.erase(it);
        return v;
    }

    template <typename T>
    std::optional<T> maybe(const std::string& key)
    {
        if (!values_.contains(key))
            return std::nullopt;
        return get<T>(key);
    }

    void finish() const
    {
        if (!values_.empty())
            throw ParameterError(
                fmt::format("attack '{}': unknown parameter '{}'", kind_, values_.begin()->first));
    }

private:
    template <typename T>
    T convert(const std::string& key, const std::string& text) const
    {
        T v{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw ParameterError(fmt::format("attack '{}': bad value '{}' for '{}'", kind_, text, key));
        return v;
    }

    std::string kind_;
    std::map<std::string, std::string> values_;
};

std::uint64_t need_seed(std::optional<std::uint64_t> seed, std::optional<std::uint64_t> fallback,
                        std::string_view kind)
{
    if (seed)
        return *seed;
    if (fallback)
        return *fallback;
    throw ParameterError(fmt::format("attack '{}' is stochastic and needs seed=", kind));
}

void check_kernel(int k)
{
    if (k < 3 || k % 2 == 0)
        throw ParameterError(fmt::format("filter size {} must be odd and >= 3", k));
}

std::uint8_t to_pixel(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

// Uniform integer in [0, bound) by rejection.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

// 53-bit uniform in [0,1).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Separable convolution with per-tap weights, clamp-to-edge borders.
std::vector<double> separable(const GrayImage& img, std::span<const double> taps)
{
    const int w = img.width();
    const int h = img.height();
    const int r = static_cast<int>(taps.size() / 2);
    const auto uw = static_cast<std::size_t>(w);

    std::vector<double> horiz(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
    std::vector<double> padded(uw + 2 * static_cast<std::size_t>(r));
    for (int y = 0; y < h; ++y) {
        for (int x = -r; x < w + r; ++x)
            padded[static_cast<std::size_t>(x + r)] = img.at(std::clamp(x, 0, w - 1), y);
        std::span<double> row(horiz.data() + static_cast<std::size_t>(y) * uw, uw);
        for (std::size_t t = 0; t < taps.size(); ++t)
            kernels::axpy(taps[t], std::span<const double>(padded).subspan(t, uw), row);
    }

    std::vector<double> out(horiz.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        std::span<double> row(out.data() + static_cast<std::size_t>(y) * uw, uw);
        for (int t = -r; t <= r; ++t) {
            const int src = std::clamp(y + t, 0, h - 1);
            kernels::axpy(taps[static_cast<std::size_t>(t + r)],
                          std::span<const double>(horiz.data() + static_cast<std::size_t>(src) * uw, uw), row);
        }
    }
    return out;
}

} // namespace

AttackSpec parse(std::string_view text, std::optional<std::uint64_t> default_seed)
{
    text = trim(text);
    const auto colon = text.find(':');
    const std::string kind(trim(text.substr(0, colon)));
    ParamList p(kind, colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));

    AttackSpec spec = [&]() -> AttackSpec {
        if (kind == "jpeg")
            return Jpeg{p.get<int>("qf")};
        if (kind == "avg")
            return AverageFilter{p.get<int>("k")};
        if (kind == "median")
            return MedianFilter{p.get<int>("k")};
        if (kind == "gauss") {
            const int k = p.get<int>("k");
            return GaussianFilter{k, p.get<double>("sigma")};
        }
        if (kind == "gnoise") {
            const double var = p.get<double>("var");
            return GaussianNoise{var, need_seed(p.maybe<std::uint64_t>("seed"), default_seed, kind)};
        }
        if (kind == "spnoise") {
            const double pct = p.get<double>("pct");
            return SaltPepper{pct, need_seed(p.maybe<std::uint64_t>("seed"), default_seed, kind)};
        }
        if (kind == "resize")
            return Resize{p.get<double>("f")};
        throw ParameterError(fmt::format("unknown attack kind '{}'", kind));
    }();
    p.finish();
    validate(spec);
    return spec;
}

std::string kind_name(const AttackSpec& spec)
{
    return std::visit(overloaded{
                          [](const Jpeg&) { return "jpeg"; },
                          [](const AverageFilter&) { return "avg"; },
                          [](const MedianFilter&) { return "median"; },
                          [](const GaussianFilter&) { return "gauss"; },
                          [](const GaussianNoise&) { return "gnoise"; },
                          [](const SaltPepper&) { return "spnoise"; },
                          [](const Resize&) { return "resize"; },
                      },
                      spec);
}

std::string params_string(const AttackSpec& spec)
{
    return std::visit(overloaded{
                          [](const Jpeg& a) { return fmt::format("qf={}", a.qf); },
                          [](const AverageFilter& a) { return fmt::format("k={}", a.k); },
                          [](const MedianFilter& a) { return fmt::format("k={}", a.k); },
                          [](const GaussianFilter& a) { return fmt::format("k={},sigma={}", a.k, a.sigma); },
                          [](const GaussianNoise& a) { return fmt::format("var={},seed={}", a.variance, a.seed); },
                          [](const SaltPepper& a) { return fmt::format("pct={},seed={}", a.percent, a.seed); },
                          [](const Resize& a) { return fmt::format("f={}", a.factor); },
                      },
                      spec);
}

std::string to_string(const AttackSpec& spec) { return kind_name(spec) + ":" + params_string(spec); }

void validate(const AttackSpec& spec)
{
    std::visit(overloaded{
                   [](const Jpeg& a) {
                       if (a.qf < 1 || a.qf > 100)
                           throw ParameterError(fmt::format("JPEG quality {} outside [1,100]", a.qf));
                   },
                   [](const AverageFilter& a) { check_kernel(a.k); },
                   [](const MedianFilter& a) { check_kernel(a.k); },
                   [](const GaussianFilter& a) {
                       check_kernel(a.k);
                       if (!(a.sigma > 0.0) || !std::isfinite(a.sigma))
                           throw ParameterError("Gaussian filter sigma must be positive");
                   },
                   [](const GaussianNoise& a) {
                       if (!(a.variance >= 0.0) || !std::isfinite(a.variance))
                           throw ParameterError("noise variance must be >= 0");
                   },
                   [](const SaltPepper& a) {
                       if (!(a.percent >= 0.0 && a.percent <= 100.0))
                           throw ParameterError("salt-and-pepper density must be in [0,100] percent");
                   },
                   [](const Resize& a) {
                       if (!(a.factor > 0.0 && a.factor <= 1.0))
                           throw ParameterError("resize factor must be in (0,1]");
                   },
               },
               spec);
}

GrayImage apply(const GrayImage& img, const AttackSpec& spec)
{
    validate(spec);
    return std::visit(overloaded{
                          [&](const Jpeg& a) { return jpeg_attack(img, a.qf); },
                          [&](const AverageFilter& a) { return average_filter(img, a.k); },
                          [&](const MedianFilter& a) { return median_filter(img, a.k); },
                          [&](const GaussianFilter& a) { return gaussian_filter(img, a.k, a.sigma); },
                          [&](const GaussianNoise& a) { return gaussian_noise(img, a.variance, a.seed); },
                          [&](const SaltPepper& a) { return salt_pepper(img, a.percent, a.seed); },
                          [&](const Resize& a) { return resize_attack(img, a.factor); },
                      },
                      spec);
}

const std::array<int, 64>& standard_luma_table()
{
    static const std::array<int, 64> table{
        16, 11, 10, 16, 24,  40,  51,  61,  //
        12, 12, 14, 19, 26,  58,  60,  55,  //
        14, 13, 16, 24, 40,  57,  69,  56,  //
        14, 17, 22, 29, 51,  87,  80,  62,  //
        18, 22, 37, 56, 68,  109, 103, 77,  //
        24, 35, 55, 64, 81,  104, 113, 92,  //
        49, 64, 78, 87, 103, 121, 120, 101, //
        72, 92, 95, 98, 112, 100, 103, 99,
    };
    return table;
}

std::array<int, 64> scaled_luma_table(int qf)
{
    validate(Jpeg{qf});
    const int scale = qf < 50 ? 5000 / qf : 200 - 2 * qf;
    std::array<int, 64> out{};
    const auto& base = standard_luma_table();
    for (std::size_t i = 0; i < 64; ++i)
        out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
    return out;
}

GrayImage jpeg_attack(const GrayImage& img, int qf)
{
    const auto table = scaled_luma_table(qf);
    if (img.empty() || img.width() % 8 != 0 || img.height() % 8 != 0)
        throw DimensionError("JPEG attack needs dimensions that are multiples of 8");
    GrayImage out(img.width(), img.height());
    for (int by = 0; by < img.height(); by += 8) {
        for (int bx = 0; bx < img.width(); bx += 8) {
            SampleBlock block = read_block(img, bx, by, 8);
            for (double& v : block.data())
                v -= 128.0;
            CoeffBlock coeffs = dct2(block);
            auto c = coeffs.data();
            for (std::size_t i = 0; i < 64; ++i)
                c[i] = std::round(c[i] / table[i]) * table[i];
            SampleBlock rec = idct2(coeffs);
            for (double& v : rec.data())
                v += 128.0;
            write_block(out, bx, by, rec);
        }
    }
    return out;
}

GrayImage average_filter(const GrayImage& img, int k)
{
    check_kernel(k);
    const std::vector<double> ones(static_cast<std::size_t>(k), 1.0);
    const std::vector<double> sums = separable(img, ones);
    GrayImage out(img.width(), img.height());
    const double area = static_cast<double>(k) * k;
    for (std::size_t i = 0; i < sums.size(); ++i)
        out.values()[i] = to_pixel(sums[i] / area);
    return out;
}

GrayImage gaussian_filter(const GrayImage& img, int k, double sigma)
{
    validate(GaussianFilter{k, sigma});
    // The normalised 2-D kernel g(x)g(y)/S^2 is the outer product of the
    // normalised 1-D kernel with itself.
    std::vector<double> taps(static_cast<std::size_t>(k));
    const int r = k / 2;
    double total = 0.0;
    for (int t = -r; t <= r; ++t)
        total += taps[static_cast<std::size_t>(t + r)] = std::exp(-(t * t) / (2.0 * sigma * sigma));
    for (double& t : taps)
        t /= total;
    const std::vector<double> filtered = separable(img, taps);
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < filtered.size(); ++i)
        out.values()[i] = to_pixel(filtered[i]);
    return out;
}

GrayImage median_filter(const GrayImage& img, int k)
{
    check_kernel(k);
    const int w = img.width();
    const int h = img.height();
    const int r = k / 2;
    const int rank = k * k / 2; // 0-based position of the median
    GrayImage out(w, h);

    // Sliding histogram along each row; `below` counts window samples < median.
    for (int y = 0; y < h; ++y) {
        std::array<int, 256> hist{};
        auto add_column = [&](int x, int delta) {
            const int cx = std::clamp(x, 0, w - 1);
            for (int t = -r; t <= r; ++t)
                hist[img.at(cx, std::clamp(y + t, 0, h - 1))] += delta;
        };
        for (int x = -r; x <= r; ++x)
            add_column(x, 1);
        int median = 0;
        int below = 0;
        for (int x = 0; x < w; ++x) {
            if (x > 0) {
                const int leaving = std::clamp(x - r - 1, 0, w - 1);
                const int entering = std::clamp(x + r, 0, w - 1);
                for (int t = -r; t <= r; ++t) {
                    const int row = std::clamp(y + t, 0, h - 1);
                    const int out_v = img.at(leaving, row);
                    const int in_v = img.at(entering, row);
                    --hist[out_v];
                    ++hist[in_v];
                    below += (in_v < median) - (out_v < median);
                }
            }
            while (below > rank) {
                --median;
                below -= hist[median];
            }
            while (below + hist[median] <= rank) {
                below += hist[median];
                ++median;
            }
            out.at(x, y) = static_cast<std::uint8_t>(median);
        }
    }
    return out;
}

GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed)
{
    validate(GaussianNoise{variance, seed});
    const double stddev = 255.0 * std::sqrt(variance);
    std::mt19937_64 rng(seed);
    GrayImage out(img.width(), img.height());
    const auto in = img.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < in.size(); i += 2) {
        // Box-Muller: one pair of uniforms gives two independent normals.
        const double u1 = 1.0 - uniform01(rng); // (0,1]
        const double u2 = uniform01(rng);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        dst[i] = to_pixel(in[i] + stddev * radius * std::cos(angle));
        if (i + 1 < in.size())
            dst[i + 1] = to_pixel(in[i + 1] + stddev * radius * std::sin(angle));
    }
    return out;
}

GrayImage salt_pepper(const GrayImage& img, double percent, std::uint64_t seed)
{
    validate(SaltPepper{percent, seed});
    const std::size_t n = img.size();
    const auto count = static_cast<std::size_t>(std::floor(percent / 100.0 * static_cast<double>(n)));
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = static_cast<std::uint32_t>(i);
    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i)
        std::swap(order[i], order[i + uniform_index(rng, n - i)]);

    GrayImage out = img;
    const std::size_t salt = count / 2;
    for (std::size_t i = 0; i < count; ++i)
        out.values()[order[i]] = i < salt ? 255 : 0;
    return out;
}

GrayImage resample_bilinear(const GrayImage& img, int width, int height)
{
    if (width < 1 || height < 1 || img.empty())
        throw DimensionError("resample needs non-empty source and target");
    GrayImage out(width, height);
    const double sx = static_cast<double>(img.width()) / width;
    const double sy = static_cast<double>(img.height()) / height;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(img.height() - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(img.width() - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double wx = fx - x0;
            const double top = img.at(x0, y0) * (1.0 - wx) + img.at(x1, y0) * wx;
            const double bottom = img.at(x0, y1) * (1.0 - wx) + img.at(x1, y1) * wx;
            out.at(x, y) = to_pixel(top * (1.0 - wy) + bottom * wy);
        }
    }
    return out;
}

GrayImage resize_attack(const GrayImage& img, double factor)
{
    validate(Resize{factor});
    const int w = std::max(1, static_cast<int>(std::lround(img.width() * factor)));
    const int h = std::max(1, static_cast<int>(std::lround(img.height() * factor)));
    return resample_bilinear(resample_bilinear(img, w, h), img.width(), img.height());
}

} // namespace dpwm::attacks
