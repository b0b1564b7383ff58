#pragma once

#include <cmath>

#include "fdl/core/error.hpp"

namespace fdl::setlib {

/// Comb J_k^omega: k teeth of half-width 1/(2 omega k) centred at j/k.
class CombParams {
 public:
  CombParams(long k, double omega) : k_(k), omega_(omega) {
    require(k >= 3, "CombParams: k must be >= 3");
    require(omega > 1.0, "CombParams: omega must exceed 1");
  }

  long teeth() const { return k_; }
  double omega() const { return omega_; }
  double half_width() const { return 1.0 / (2.0 * omega_ * static_cast<double>(k_)); }
  /// k intervals of length 1/(omega k).
  double measure() const { return 1.0 / omega_; }

 private:
  long k_;
  double omega_;
};

inline double distance_to_teeth(const CombParams& c, double x) {
  const double y = x * static_cast<double>(c.teeth());
  return std::abs(y - std::nearbyint(y)) / static_cast<double>(c.teeth());
}

inline bool comb_membership(const CombParams& c, double x) { return distance_to_teeth(c, x) <= c.half_width(); }

}  // namespace fdl::setlib
