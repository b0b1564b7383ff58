#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fdl/core/error.hpp"
#include "fdl/core/fit.hpp"
#include "fdl/core/io.hpp"
#include "fdl/core/trig_poly.hpp"

namespace fdl {

/// Partial sums below this modulus count as zero.
inline constexpr double kVanishingThreshold = 1e-14;

struct DivergenceEstimate {
  double beta_hat = 0.0;
  double r2 = 1.0;
  std::vector<Frequency> schedule;
  std::vector<double> envelope;  ///< running max of log |S_n f(x)|, floored at log 1e-14
  bool vanishing = false;        ///< every partial sum below 1e-14
};

/// n = 2^m for lo <= m <= hi.
inline std::vector<Frequency> dyadic_schedule(int lo, int hi) {
  require(0 <= lo && lo < hi && hi <= 40, "dyadic_schedule: need 0 <= lo < hi <= 40");
  std::vector<Frequency> out;
  for (int m = lo; m <= hi; ++m) out.push_back(Frequency{1} << m);
  return out;
}

/// 2^m for m from 4 up to floor(log2 degree(f)).
inline std::vector<Frequency> default_schedule(const TrigPoly& f) {
  const Frequency d = f.degree();
  require(d >= 128, "default_schedule: degree must be >= 128 for at least four dyadic levels");
  int top = 0;
  while ((Frequency{2} << top) <= d) ++top;
  return dyadic_schedule(4, top);
}

namespace detail {

inline void check_schedule(std::span<const Frequency> schedule) {
  require(schedule.size() >= 4, "divergence_index: schedule needs at least four indices");
  require(schedule.front() >= 1, "divergence_index: schedule indices must be >= 1");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    require(schedule[i] > schedule[i - 1], "divergence_index: schedule must be strictly increasing");
}

/// Running max envelope and least-squares slope over the tail half.
inline DivergenceEstimate fit_envelope(std::span<const Frequency> schedule, std::span<const Complex> sums) {
  DivergenceEstimate est;
  est.schedule.assign(schedule.begin(), schedule.end());
  double running = 0.0;
  for (const auto& s : sums) {
    running = std::max(running, std::abs(s));
    est.envelope.push_back(std::log(std::max(running, kVanishingThreshold)));
  }
  if (running < kVanishingThreshold) {
    est.vanishing = true;
    return est;
  }
  const std::size_t first = schedule.size() / 2;
  std::vector<double> x, y;
  for (std::size_t i = first; i < schedule.size(); ++i) {
    x.push_back(std::log(static_cast<double>(schedule[i])));
    y.push_back(est.envelope[i]);
  }
  const auto fit = least_squares(x, y);
  est.beta_hat = fit.slope;
  est.r2 = fit.r2;
  return est;
}

}  // namespace detail

/// Finite-scale divergence index at x: slope of the upper envelope of
/// log |S_n f(x)| against log n over the tail half of the schedule.
inline DivergenceEstimate divergence_index(const TrigPoly& f, double x, std::span<const Frequency> schedule) {
  detail::check_schedule(schedule);
  const auto sums = partial_sums_at(f, x, schedule);
  return detail::fit_envelope(schedule, sums);
}

inline io::json to_json(const DivergenceEstimate& e) {
  io::json env = io::json::array();
  for (double v : e.envelope) env.push_back(io::number(v));
  return {{"beta_hat", io::number(e.beta_hat)},
          {"r2", io::number(e.r2)},
          {"vanishing", e.vanishing},
          {"schedule", e.schedule},
          {"envelope", env}};
}

}  // namespace fdl
