#pragma once

#include <string>

#include "dpwm/image.hpp"

namespace dpwm {

/// 10*log10(255^2 / MSE). Identical images give +infinity.
double psnr(const GrayImage& a, const GrayImage& b);

/// Percentage of differing bits, in [0,100].
double ber(const BitPlane& a, const BitPlane& b);

/// Two decimals, or "inf" for the zero-error sentinel.
std::string format_db(double db);

} // namespace dpwm
