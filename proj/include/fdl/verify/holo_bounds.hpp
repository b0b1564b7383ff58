#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fdl/constructions/holo.hpp"
#include "fdl/core/io.hpp"
#include "fdl/core/random.hpp"

namespace fdl::verify {

/// The four normalised quantities of the holomorphic kernel bounds.
struct HoloBoundsReport {
  long k = 0;
  double omega = 0.0;
  std::size_t grid = 0;
  int interior_samples = 0;
  double min_re_scaled = std::numeric_limits<double>::infinity();  ///< min Re f * omega k (closed disk samples)
  double min_re = std::numeric_limits<double>::infinity();         ///< min Re f (closed disk samples)
  double c2 = std::numeric_limits<double>::infinity();             ///< min over the comb of |f| / omega
  double c3 = 0.0;                                                 ///< max over T of |f| / omega
  double log_derivative_scaled = 0.0;                              ///< max over T of |f'/f| / (omega k)
  double center_error = 0.0;                                       ///< |f(0) - 1|

  bool passed() const { return min_re > 0.0 && log_derivative_scaled <= 1.0 + 1e-6 && center_error < 1e-12; }
};

/// Boundary grid of M points plus `interior_samples` seeded points of the open disk.
inline HoloBoundsReport check_holo_bounds(const HoloKernelParams& params, std::size_t M, int interior_samples = 1000,
                                          std::uint64_t seed = kDefaultSeed) {
  require(is_power_of_two(M) && M >= 64, "check_holo_bounds: grid size must be a power of two >= 64");
  require(interior_samples >= 0, "check_holo_bounds: interior sample count must be nonnegative");
  HoloBoundsReport r;
  r.k = params.k();
  r.omega = params.omega();
  r.grid = M;
  r.interior_samples = interior_samples;
  const double wk = params.omega() * static_cast<double>(params.k());
  const auto comb = params.comb();
  auto note_re = [&](Complex f) {
    r.min_re = std::min(r.min_re, f.real());
    r.min_re_scaled = std::min(r.min_re_scaled, f.real() * wk);
  };
  for (std::size_t m = 0; m < M; ++m) {
    const double x = static_cast<double>(m) / static_cast<double>(M);
    const Complex z = unit_exponential(1, x);
    const Complex f = holo_kernel(params, z);
    note_re(f);
    const double a = std::abs(f) / params.omega();
    r.c3 = std::max(r.c3, a);
    if (setlib::comb_membership(comb, x)) r.c2 = std::min(r.c2, a);
    r.log_derivative_scaled = std::max(r.log_derivative_scaled, std::abs(holo_log_derivative(params, z)) / wk);
  }
  Rng rng(seed);
  for (int i = 0; i < interior_samples; ++i) {
    const double radius = std::sqrt(uniform01(rng));
    note_re(holo_kernel(params, std::polar(radius, 2.0 * std::numbers::pi * uniform01(rng))));
  }
  const Complex f0 = holo_kernel(params, 0.0);
  note_re(f0);
  r.center_error = std::abs(f0 - 1.0);
  return r;
}

/// omega = max(log k, 3) as used in the sweep.
inline double default_holo_omega(long k) { return std::max(std::log(static_cast<double>(k)), 3.0); }

struct HoloSweep {
  std::vector<HoloBoundsReport> reports;
  double c2_spread = 0.0;  ///< max / min of c2 across the sweep
  double c3_spread = 0.0;
  /// Re f >= c1 / (omega k) is a one-sided bound whose true margin grows like
  /// omega k; c1 is fitted on the first case and must hold (within factor 2) on all others.
  bool c1_holds = true;

  bool passed() const {
    for (const auto& r : reports)
      if (!r.passed()) return false;
    return c1_holds && c2_spread < 2.0 && c3_spread < 2.0;
  }
};

inline HoloSweep sweep_holo_bounds(const std::vector<long>& ks, std::size_t M, int interior_samples, std::uint64_t seed) {
  require(!ks.empty(), "sweep_holo_bounds: need at least one k");
  HoloSweep s;
  for (std::size_t i = 0; i < ks.size(); ++i)
    s.reports.push_back(check_holo_bounds(HoloKernelParams(ks[i], default_holo_omega(ks[i])), M, interior_samples,
                                          trial_seed(seed, i)));
  auto spread = [&](auto get) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : s.reports) {
      lo = std::min(lo, get(r));
      hi = std::max(hi, get(r));
    }
    return hi / lo;
  };
  s.c2_spread = spread([](const HoloBoundsReport& r) { return r.c2; });
  s.c3_spread = spread([](const HoloBoundsReport& r) { return r.c3; });
  for (const auto& r : s.reports) s.c1_holds = s.c1_holds && r.min_re_scaled >= 0.5 * s.reports.front().min_re_scaled;
  return s;
}

inline io::json to_json(const HoloBoundsReport& r) {
  return {{"k", r.k},
          {"omega", io::number(r.omega)},
          {"grid", r.grid},
          {"interior_samples", r.interior_samples},
          {"min_re_f_times_omega_k", io::number(r.min_re_scaled)},
          {"min_re_f", io::number(r.min_re)},
          {"c2_min_comb_abs_f_over_omega", io::number(r.c2)},
          {"c3_max_abs_f_over_omega", io::number(r.c3)},
          {"max_log_derivative_over_omega_k", io::number(r.log_derivative_scaled)},
          {"center_error", io::number(r.center_error)},
          {"passed", r.passed()}};
}

}  // namespace fdl::verify
