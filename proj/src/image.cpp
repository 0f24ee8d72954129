#include "dpwm/image.hpp"

#include <algorithm>
#include <cmath>

namespace dpwm {

namespace {

template <typename Range, typename Pred>
void require_all(const Range& values, Pred pred, const char* what)
{
    if (!std::all_of(values.begin(), values.end(), pred))
        throw ParameterError(what);
}

} // namespace

BitPlane::BitPlane(int width, int height, std::uint8_t fill)
    : Grid(width, height, fill)
{
    if (fill > 1)
        throw ParameterError("bit plane entries must be 0 or 1");
}

BitPlane::BitPlane(int width, int height, std::vector<std::uint8_t> bits)
    : Grid(width, height, std::move(bits))
{
    require_all(values_, [](std::uint8_t b) { return b <= 1; }, "bit plane entries must be 0 or 1");
}

BitPlane BitPlane::complement() const
{
    BitPlane out = *this;
    for (auto& b : out.values_)
        b ^= 1u;
    return out;
}

TernaryPlane::TernaryPlane(int width, int height, std::int8_t fill)
    : Grid(width, height, fill)
{
    if (fill < -1 || fill > 1)
        throw ParameterError("ternary plane entries must be -1, 0 or +1");
}

TernaryPlane::TernaryPlane(int width, int height, std::vector<std::int8_t> symbols)
    : Grid(width, height, std::move(symbols))
{
    require_all(values_, [](std::int8_t s) { return s >= -1 && s <= 1; },
                "ternary plane entries must be -1, 0 or +1");
}

RealPlane::RealPlane(int width, int height, double fill)
    : Grid(width, height, fill)
{
    if (!std::isfinite(fill))
        throw ParameterError("real plane entries must be finite");
}

RealPlane::RealPlane(int width, int height, std::vector<double> values)
    : Grid(width, height, std::move(values))
{
    require_all(values_, [](double v) { return std::isfinite(v); }, "real plane entries must be finite");
}

BitPlane binarize(const GrayImage& img, std::uint8_t threshold)
{
    std::vector<std::uint8_t> bits(img.size());
    std::transform(img.values().begin(), img.values().end(), bits.begin(),
                   [threshold](std::uint8_t s) { return static_cast<std::uint8_t>(s >= threshold); });
    return BitPlane(img.width(), img.height(), std::move(bits));
}

GrayImage to_image(const BitPlane& plane)
{
    std::vector<std::uint8_t> samples(plane.size());
    std::transform(plane.values().begin(), plane.values().end(), samples.begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
    return GrayImage(plane.width(), plane.height(), std::move(samples));
}

} // namespace dpwm
