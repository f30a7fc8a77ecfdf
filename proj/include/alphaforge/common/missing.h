#pragma once

#include <cmath>
#include <limits>

namespace alphaforge {

// Every numeric container in the library uses quiet NaN as the missing marker.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

// Non-finite arithmetic results (x/0, overflow) collapse to missing.
inline double finite_or_missing(double v) { return std::isfinite(v) ? v : kMissing; }

}  // namespace alphaforge
