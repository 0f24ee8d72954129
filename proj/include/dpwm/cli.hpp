#pragma once

#include <iosfwd>

namespace dpwm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

/// Entry point behind the `dpwm` executable. Data goes to `out`, messages to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dpwm::cli
