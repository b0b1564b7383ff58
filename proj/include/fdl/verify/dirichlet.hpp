#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fdl/core/grid.hpp"
#include "fdl/core/parallel.hpp"
#include "fdl/core/random.hpp"
#include "fdl/core/trig_poly.hpp"
#include "fdl/verify/report.hpp"

namespace fdl::verify {

/// How the index function n: T -> {1..N} is chosen.
enum class IndexStrategy { Constant, Random, Greedy };

inline std::string to_string(IndexStrategy s) {
  switch (s) {
    case IndexStrategy::Constant: return "constant";
    case IndexStrategy::Random: return "random";
    case IndexStrategy::Greedy: return "greedy";
  }
  return "?";
}

inline IndexStrategy parse_index_strategy(const std::string& s) {
  if (s == "constant") return IndexStrategy::Constant;
  if (s == "random") return IndexStrategy::Random;
  if (s == "greedy") return IndexStrategy::Greedy;
  throw precondition_error("unknown index strategy: " + s + " (expected constant, random or greedy)");
}

/// Default quadrature grid: 8 points per period of D_N.
inline std::size_t dirichlet_grid(std::int64_t N) { return next_power_of_two(static_cast<std::size_t>(16 * N)); }

/// max over 1 <= n <= N of |D_n(u)| for each u, by rotating (2n+1) pi u in
/// steps of 2 pi u; the points advance together so the recurrence vectorizes.
inline std::vector<double> greedy_dirichlet_envelopes(std::int64_t N, std::span<const double> us) {
  const std::size_t B = us.size();
  std::vector<double> sn(B), cn(B), c2(B), s2(B), best(B), inv(B);
  for (std::size_t i = 0; i < B; ++i) {
    const double theta = std::numbers::pi * (us[i] - std::floor(us[i]));
    const double s = std::sin(theta);
    inv[i] = std::abs(s) < 1e-12 ? 0.0 : 1.0 / std::abs(s);
    c2[i] = std::cos(2 * theta);
    s2[i] = std::sin(2 * theta);
    sn[i] = std::sin(3 * theta);
    cn[i] = std::cos(3 * theta);
    best[i] = std::abs(sn[i]);
  }
  for (std::int64_t n = 2; n <= N; ++n) {
    for (std::size_t i = 0; i < B; ++i) {
      const double t = sn[i] * c2[i] + cn[i] * s2[i];
      cn[i] = cn[i] * c2[i] - sn[i] * s2[i];
      sn[i] = t;
      best[i] = std::max(best[i], std::abs(t));
    }
  }
  for (std::size_t i = 0; i < B; ++i) best[i] = inv[i] == 0.0 ? static_cast<double>(2 * N + 1) : best[i] * inv[i];
  return best;
}

inline double greedy_dirichlet_envelope(std::int64_t N, double u) {
  return greedy_dirichlet_envelopes(N, std::span<const double>(&u, 1)).front();
}

/// Riemann sum of |D_{n(x)}(x - t)| over the grid m/M.
inline double variable_dirichlet_integral(std::int64_t N, IndexStrategy strategy, double t, std::size_t M, Rng& rng) {
  require(N >= 1, "variable_dirichlet_integral: N must be >= 1");
  require(is_power_of_two(M), "variable_dirichlet_integral: grid size must be a power of two");
  double acc = 0.0;
  const double inv = 1.0 / static_cast<double>(M);
  if (strategy == IndexStrategy::Greedy) {
    constexpr std::size_t kChunk = 512;
    std::vector<double> us;
    for (std::size_t m0 = 0; m0 < M; m0 += kChunk) {
      us.clear();
      for (std::size_t m = m0; m < std::min(M, m0 + kChunk); ++m) us.push_back(static_cast<double>(m) * inv - t);
      for (double v : greedy_dirichlet_envelopes(N, us)) acc += v;
    }
    return acc * inv;
  }
  for (std::size_t m = 0; m < M; ++m) {
    const double u = static_cast<double>(m) * inv - t;
    if (strategy == IndexStrategy::Constant)
      acc += std::abs(dirichlet_eval(N, u));
    else
      acc += std::abs(dirichlet_eval(uniform_int(rng, 1, N), u));
  }
  return acc * inv;
}

/// Ratio of the integral to log N at shifts t drawn from the seed; one row per
/// (shift, dyadic scale up to N).
inline VerificationReport check_variable_dirichlet(std::int64_t N, IndexStrategy strategy, int t_samples,
                                                   std::uint64_t seed, unsigned threads = 0) {
  require(N >= 4, "check_variable_dirichlet: N must be >= 4");
  require(t_samples >= 1, "check_variable_dirichlet: need at least one t sample");
  VerificationReport rep;
  rep.name = "dirichlet-" + to_string(strategy);
  rep.trials = t_samples;
  rep.seed = seed;
  const auto scales = dyadic_scales(N);
  rep.rows.resize(static_cast<std::size_t>(t_samples) * scales.size());
  parallel_for(
      rep.rows.size(),
      [&](std::size_t i) {
        const auto trial = static_cast<std::int64_t>(i / scales.size());
        const auto scale = scales[i % scales.size()];
        const auto tseed = trial_seed(seed, static_cast<std::uint64_t>(trial));
        Rng rng(tseed);
        const double t = uniform01(rng);
        const double integral = variable_dirichlet_integral(scale, strategy, t, dirichlet_grid(scale), rng);
        rep.rows[i] = {trial, tseed, scale, integral / std::log(static_cast<double>(scale))};
      },
      threads);
  rep.summarize();
  rep.assert_scale_stability();
  rep.assert_limit(1.1 * rep.fitted_constant, "exceeds the constant fitted at the smallest scale by more than 10%");
  return rep;
}

}  // namespace fdl::verify
