#include "dpwm/metrics.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "dpwm/kernels.hpp"

namespace dpwm {

double psnr(const GrayImage& a, const GrayImage& b)
{
    if (!a.same_shape(b))
        throw DimensionError("psnr: images differ in size");
    if (a.empty())
        throw DimensionError("psnr: empty images");
    const std::uint64_t sse = kernels::sum_sq_diff(a.values(), b.values());
    if (sse == 0)
        return std::numeric_limits<double>::infinity();
    const double mse = static_cast<double>(sse) / static_cast<double>(a.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ber(const BitPlane& a, const BitPlane& b)
{
    if (!a.same_shape(b))
        throw DimensionError("ber: planes differ in size");
    if (a.empty())
        throw DimensionError("ber: empty planes");
    const std::size_t wrong = kernels::count_mismatch(a.values(), b.values());
    return 100.0 * static_cast<double>(wrong) / static_cast<double>(a.size());
}

std::string format_db(double db)
{
    if (std::isinf(db) && db > 0)
        return "inf";
    return fmt::format("{:.2f}", db);
}

} // namespace dpwm
