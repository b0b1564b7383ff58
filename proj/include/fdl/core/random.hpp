#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fdl/core/trig_poly.hpp"

namespace fdl {

/// Fixed default seed; FDL_SEED overrides it at the CLI layer.
inline constexpr std::uint64_t kDefaultSeed = 20240601;

using Rng = std::mt19937_64;

/// Per-trial generator derived from the master seed and the trial index only,
/// so trials can run in any order.
inline Rng trial_rng(std::uint64_t master, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) { return trial_rng(master, trial)(); }

/// Uniform on [0, 1) from the top 53 bits; portable across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [lo, hi] (inclusive).
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(span));
}

inline double rademacher(Rng& rng) { return (rng() >> 63) ? 1.0 : -1.0; }

/// Independent +-1 coefficients on every frequency of [lo, hi].
inline TrigPoly rademacher_poly(Frequency lo, Frequency hi, Rng& rng) {
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Frequency k = lo; k <= hi; ++k) terms.push_back({k, rademacher(rng)});
  return TrigPoly::from_terms(std::move(terms));
}

}  // namespace fdl
