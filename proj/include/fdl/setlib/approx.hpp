#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdl/core/error.hpp"

namespace fdl::setlib {

/// Approximation exponent of x by dyadics of level j:
///   (log2(1/d_j) - 1) / j,   d_j = min_k |x - k/2^j|.
/// Every x has d_j <= 2^-(j+1), so the value is >= 1 for all x; the shift by
/// one bit removes the O(1/j) bias that the generic half-spacing would
/// otherwise add. Exact dyadics of level <= j give +infinity.
inline double level_approx_exponent(double x, int j) {
  const double scale = std::ldexp(1.0, j);
  const double y = x * scale;
  const double d = std::abs(y - std::nearbyint(y)) / scale;
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return (-std::log2(d) - 1.0) / static_cast<double>(j);
}

/// Largest level exponent over the window [lo, hi].
inline double dyadic_approx_exponent(double x, int lo, int hi) {
  require(1 <= lo && lo <= hi && hi <= 62, "dyadic_approx_exponent: need 1 <= lo <= hi <= 62");
  double best = 0.0;
  for (int j = lo; j <= hi; ++j) best = std::max(best, level_approx_exponent(x, j));
  return best;
}

/// Tail-window estimate over [depth/2, depth]. Doubles are dyadic rationals,
/// so depths beyond the mantissa of x report +infinity.
inline double dyadic_approx_exponent(double x, int depth) {
  require(depth >= 4, "dyadic_approx_exponent: depth must be >= 4");
  return dyadic_approx_exponent(x, depth / 2, depth);
}

}  // namespace fdl::setlib
