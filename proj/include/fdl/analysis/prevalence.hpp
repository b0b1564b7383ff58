#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fdl/constructions/saturator.hpp"
#include "fdl/core/io.hpp"
#include "fdl/core/parallel.hpp"
#include "fdl/core/random.hpp"
#include "fdl/setlib/dyadic.hpp"

namespace fdl {

struct ProbeConfig {
  int s = 9;
  double alpha = 2.0;
  double p = 2.0;
  double R = 1.0;
  double M_thresh = 1e-4;
  int trials = 200;
  int depth = 4;  ///< test points K/2^depth and their 2^(-alpha depth)/2 perturbations
  int jmax = 10;
  std::optional<double> beta;  ///< defaults to 0.8 (1/p)(1 - 1/alpha)
  std::size_t grid = 0;        ///< family grid, 0 picks the smallest admissible size
  std::uint64_t seed = kDefaultSeed;

  double target() const { return (1.0 - 1.0 / alpha) / p; }
  double resolved_beta() const { return beta.value_or(0.8 * target()); }
  double epsilon() const { return target() - resolved_beta(); }
  /// s > 4 / epsilon, the size the measure-one argument asks for.
  bool proof_bound_holds() const { return epsilon() > 0.0 && static_cast<double>(s) * epsilon() > 4.0; }

  std::size_t resolved_grid() const {
    if (grid != 0) return grid;
    const std::size_t top = static_cast<std::size_t>(2 * s) << (jmax + 2);
    std::size_t M = 64;
    while (top >= M / 2) M *= 2;
    return M;
  }

  void validate() const {
    require(s >= 1 && s <= 64, "probe: s must lie in [1, 64]");
    require(alpha > 1.0, "probe: alpha must be > 1");
    require(std::isfinite(p) && p >= 1.0, "probe: p must be finite and >= 1");
    require(R > 0.0 && std::isfinite(R), "probe: R must be positive");
    require(M_thresh > 0.0, "probe: M_thresh must be positive");
    require(trials >= 1, "probe: trials must be >= 1");
    require(depth >= 1 && depth <= 12, "probe: depth must lie in [1, 12]");
    require(jmax >= setlib::DyadicFamilyParams::min_level(alpha) && jmax <= 20,
            "probe: jmax must lie between the first admissible level and 20");
    const double b = resolved_beta();
    require(b >= 0.0 && b < target(), "probe: beta must lie in [0, (1/p)(1 - 1/alpha))");
    require(grid == 0 || is_power_of_two(grid), "probe: grid must be a power of two");
  }
};

struct ProbeResult {
  ProbeConfig config;
  double fraction = 0.0;
  std::vector<std::int64_t> failures;
  bool forced_zero_success = false;  ///< c = 0
  bool forced_unit_success = false;  ///< c = e_1
  double unit_margin = 0.0;          ///< min over test points of the c = e_1 statistic / M_thresh
  std::size_t test_points = 0;
  std::size_t schedule_size = 0;
};

/// Precomputed S_n f(x) and S_n g_r(x) at every test point and block endpoint n;
/// each trial is then a linear combination.
class PrevalenceProbe {
 public:
  PrevalenceProbe(const TrigPoly& f, const ProbeConfig& config, unsigned threads = 0) : config_(config) {
    config_.validate();
    const auto family =
        disjoint_family(config_.s, config_.alpha, NormExponent(config_.p), config_.jmax, config_.resolved_grid(), threads);
    for (const auto& b : family.blocks) {
      schedule_.push_back(b.m);
      schedule_.push_back(b.n);
    }
    std::sort(schedule_.begin(), schedule_.end());
    schedule_.erase(std::unique(schedule_.begin(), schedule_.end()), schedule_.end());
    const double beta = config_.resolved_beta();
    for (Frequency n : schedule_) weight_.push_back(std::pow(static_cast<double>(n), -beta));
    points_ = setlib::dyadic_test_points(config_.depth, config_.alpha);
    const std::size_t width = schedule_.size() * static_cast<std::size_t>(config_.s + 1);
    sums_.resize(points_.size() * width);
    parallel_for(
        points_.size(),
        [&](std::size_t i) {
          auto* row = sums_.data() + i * width;
          const auto base = partial_sums_at(f, points_[i], schedule_);
          std::copy(base.begin(), base.end(), row);
          for (int r = 1; r <= config_.s; ++r) {
            const auto g = partial_sums_at(family.member(r), points_[i], schedule_);
            std::copy(g.begin(), g.end(), row + static_cast<std::size_t>(r) * schedule_.size());
          }
        },
        threads);
  }

  const ProbeConfig& config() const { return config_; }
  const std::vector<Frequency>& schedule() const { return schedule_; }
  const std::vector<double>& points() const { return points_; }

  /// min over test points of max over the schedule of |S_n g(x)| / n^beta for g = f + sum c_r g_r.
  double statistic(const std::vector<double>& c) const {
    require(c.size() == static_cast<std::size_t>(config_.s), "PrevalenceProbe: coefficient vector has the wrong size");
    const std::size_t L = schedule_.size();
    const std::size_t width = L * (c.size() + 1);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto* row = sums_.data() + i * width;
      double best = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        Complex v = row[l];
        for (std::size_t r = 0; r < c.size(); ++r) v += c[r] * row[(r + 1) * L + l];
        best = std::max(best, std::abs(v) * weight_[l]);
      }
      worst = std::min(worst, best);
    }
    return worst;
  }

  bool succeeds(const std::vector<double>& c) const { return statistic(c) >= config_.M_thresh; }

  /// c = R u with u uniform in [-1, 1]^s drawn from the trial seed, so the
  /// direction sequence does not depend on R.
  std::vector<double> trial_coefficients(std::int64_t trial) const {
    Rng rng(trial_seed(config_.seed, static_cast<std::uint64_t>(trial)));
    std::vector<double> c(static_cast<std::size_t>(config_.s));
    for (auto& v : c) v = config_.R * uniform(rng, -1.0, 1.0);
    return c;
  }

  ProbeResult run(unsigned threads = 0) const {
    ProbeResult res;
    res.config = config_;
    res.test_points = points_.size();
    res.schedule_size = schedule_.size();
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(config_.trials), 0);
    parallel_for(
        ok.size(), [&](std::size_t t) { ok[t] = succeeds(trial_coefficients(static_cast<std::int64_t>(t))) ? 1 : 0; },
        threads);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < ok.size(); ++t) {
      if (ok[t])
        ++hits;
      else
        res.failures.push_back(static_cast<std::int64_t>(t));
    }
    res.fraction = static_cast<double>(hits) / static_cast<double>(ok.size());
    std::vector<double> c(static_cast<std::size_t>(config_.s), 0.0);
    res.forced_zero_success = succeeds(c);
    c[0] = 1.0;
    const double unit = statistic(c);
    res.forced_unit_success = unit >= config_.M_thresh;
    res.unit_margin = unit / config_.M_thresh;
    return res;
  }

 private:
  ProbeConfig config_;
  std::vector<Frequency> schedule_;
  std::vector<double> weight_;
  std::vector<double> points_;
  std::vector<Complex> sums_;  ///< per point: S_n f, then S_n g_1 .. S_n g_s, each over the schedule
};

inline ProbeResult prevalence_probe(const TrigPoly& f, const ProbeConfig& config, unsigned threads = 0) {
  return PrevalenceProbe(f, config, threads).run(threads);
}

inline io::json to_json(const ProbeConfig& c) {
  return {{"s", c.s},
          {"alpha", io::number(c.alpha)},
          {"p", io::number(c.p)},
          {"R", io::number(c.R)},
          {"M_thresh", io::number(c.M_thresh)},
          {"trials", c.trials},
          {"depth", c.depth},
          {"jmax", c.jmax},
          {"beta", io::number(c.resolved_beta())},
          {"epsilon", io::number(c.epsilon())},
          {"s_exceeds_4_over_epsilon", c.proof_bound_holds()},
          {"grid", c.resolved_grid()},
          {"seed", c.seed}};
}

inline io::json to_json(const ProbeResult& r) {
  return {{"fraction", io::number(r.fraction)},
          {"trials", r.config.trials},
          {"failures", r.failures},
          {"forced", {{"zero_succeeds", r.forced_zero_success}, {"unit_succeeds", r.forced_unit_success}}},
          {"unit_margin", io::number(r.unit_margin)},
          {"test_points", r.test_points},
          {"schedule_size", r.schedule_size},
          {"config", to_json(r.config)}};
}

}  // namespace fdl
