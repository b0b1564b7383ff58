#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fdl/core/error.hpp"

namespace fdl::setlib {

/// Closed real interval; may extend outside [0, 1) and is read modulo 1.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Distance on T = R/Z from x to the nearest point of the lattice 2^-level Z.
inline double distance_to_dyadic_lattice(double x, int level) {
  const double scale = std::ldexp(1.0, level);
  const double y = x * scale;
  return std::abs(y - std::nearbyint(y)) / scale;
}

inline double torus_distance(double x, double y) {
  double d = std::abs(x - y);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

/// Level j and exponent alpha of the family I_{K,j}; the coarse level is
/// J = floor(j / alpha) + 1 and must satisfy J <= j - 2 so the doubled
/// intervals stay disjoint.
class DyadicFamilyParams {
 public:
  DyadicFamilyParams(int j, double alpha) : j_(j), alpha_(alpha) {
    require(alpha > 1.0, "DyadicFamilyParams: alpha must exceed 1");
    require(j >= 1 && j <= 40, "DyadicFamilyParams: level j must lie in [1, 40]");
    J_ = coarse_level(j, alpha);
    require(J_ <= j - 2, "DyadicFamilyParams: level j=" + std::to_string(j) + " is below j_alpha=" +
                             std::to_string(min_level(alpha)) + " (need floor(j/alpha)+1 <= j-2)");
  }

  static int coarse_level(int j, double alpha) { return static_cast<int>(std::floor(j / alpha)) + 1; }

  /// Smallest admissible level j_alpha.
  static int min_level(double alpha) {
    require(alpha > 1.0, "min_level: alpha must exceed 1");
    int j = 1;
    while (coarse_level(j, alpha) > j - 2) ++j;
    return j;
  }

  int level() const { return j_; }
  int coarse() const { return J_; }
  double alpha() const { return alpha_; }
  /// Half-length 2^-j of every I_{K,j}.
  double half_width() const { return std::ldexp(1.0, -j_); }

 private:
  int j_;
  double alpha_;
  int J_;
};

/// The 2^J intervals I_{K,j} = [K/2^J - 2^-j, K/2^J + 2^-j], their union
/// (the family set) and the union of the doubled intervals.
class DyadicFamily {
 public:
  explicit DyadicFamily(DyadicFamilyParams params) : params_(params) {}

  const DyadicFamilyParams& params() const { return params_; }
  std::int64_t count() const { return std::int64_t{1} << params_.coarse(); }

  double center(std::int64_t K) const { return std::ldexp(static_cast<double>(K), -params_.coarse()); }

  std::vector<Interval> intervals() const {
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(count()));
    const double h = params_.half_width();
    for (std::int64_t K = 0; K < count(); ++K) out.push_back({center(K) - h, center(K) + h});
    return out;
  }

  double distance_to_centers(double x) const { return distance_to_dyadic_lattice(x, params_.coarse()); }

  bool contains(double x) const { return distance_to_centers(x) <= params_.half_width(); }
  bool contains_doubled(double x) const { return distance_to_centers(x) <= 2.0 * params_.half_width(); }

  /// 2^(J - j + 1).
  double measure() const { return std::ldexp(1.0, params_.coarse() - params_.level() + 1); }
  /// 2^(J - j + 2).
  double doubled_measure() const { return std::ldexp(1.0, params_.coarse() - params_.level() + 2); }

 private:
  DyadicFamilyParams params_;
};

/// Finite stand-in for the alpha-approximable set at level J: every center
/// K/2^J together with its perturbations K/2^J +- 2^(-alpha J)/2.
inline std::vector<double> dyadic_test_points(int level, double alpha, bool with_perturbations = true) {
  require(level >= 0 && level <= 30, "dyadic_test_points: level must lie in [0, 30]");
  require(alpha >= 1.0, "dyadic_test_points: alpha must be >= 1");
  const std::int64_t count = std::int64_t{1} << level;
  const double delta = 0.5 * std::exp2(-alpha * level);
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(count * (with_perturbations ? 3 : 1)));
  for (std::int64_t K = 0; K < count; ++K) {
    const double c = std::ldexp(static_cast<double>(K), -level);
    pts.push_back(c);
    if (with_perturbations) {
      const double lo = c - delta;
      pts.push_back(lo < 0.0 ? lo + 1.0 : lo);
      pts.push_back(c + delta);
    }
  }
  return pts;
}

}  // namespace fdl::setlib
