#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fdl/analysis/divergence.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/io.hpp"
#include "fdl/core/parallel.hpp"
#include "fdl/setlib/box_dimension.hpp"

namespace fdl {

/// beta_hat at every point m/M of a dyadic grid.
struct BetaField {
  std::vector<Frequency> schedule;
  std::vector<double> beta;

  std::size_t size() const { return beta.size(); }
  double point(std::size_t m) const { return static_cast<double>(m) / static_cast<double>(beta.size()); }
};

inline BetaField beta_field(const TrigPoly& f, std::size_t M, std::span<const Frequency> schedule, unsigned threads = 0) {
  require(is_power_of_two(M) && M >= 32 && M <= (std::size_t{1} << 20),
          "beta_field: grid must be a power of two in [32, 2^20]");
  detail::check_schedule(schedule);
  BetaField field;
  field.schedule.assign(schedule.begin(), schedule.end());
  field.beta.resize(M);
  parallel_for(
      M,
      [&](std::size_t m) {
        field.beta[m] = divergence_index(f, static_cast<double>(m) / static_cast<double>(M), schedule).beta_hat;
      },
      threads);
  return field;
}

/// Grid points whose beta_hat lies in [beta - tolerance, beta + tolerance].
struct LevelSet {
  double beta = 0.0;
  double tolerance = 0.0;
  std::vector<std::uint8_t> members;

  std::size_t count() const {
    std::size_t n = 0;
    for (auto v : members) n += v;
    return n;
  }
  /// Membership of the grid point nearest to x.
  bool contains(double x) const {
    const auto M = static_cast<double>(members.size());
    x -= std::floor(x);
    const auto m = static_cast<std::size_t>(std::llround(x * M)) % members.size();
    return members[m] != 0;
  }
  setlib::MembershipOracle oracle() const {
    return [this](double x) { return contains(x); };
  }
};

inline LevelSet level_set(const BetaField& field, double beta, double tolerance) {
  require(tolerance >= 0.0, "level_set: tolerance must be nonnegative");
  LevelSet ls{beta, tolerance, std::vector<std::uint8_t>(field.size(), 0)};
  for (std::size_t m = 0; m < field.size(); ++m) ls.members[m] = std::abs(field.beta[m] - beta) <= tolerance ? 1 : 0;
  return ls;
}

inline LevelSet level_set(const TrigPoly& f, double beta, double tolerance, std::size_t M,
                          std::span<const Frequency> schedule, unsigned threads = 0) {
  return level_set(beta_field(f, M, schedule, threads), beta, tolerance);
}

struct SpectrumPoint {
  double beta = 0.0;
  setlib::BoxDimEstimate dimension;
  double theory = 0.0;  ///< 1 - beta p
  std::size_t members = 0;
};

/// Box dimension of each level set over boxes 2^-m_lo .. 2^-m_hi.
inline std::vector<SpectrumPoint> spectrum_curve(const BetaField& field, std::span<const double> beta_grid,
                                                 const NormExponent& p, double tolerance, int m_lo, int m_hi) {
  require(!beta_grid.empty(), "spectrum_curve: beta grid is empty");
  require(!p.is_infinite(), "spectrum_curve: p must be finite");
  const int S = std::countr_zero(field.size());
  require(m_hi <= S, "spectrum_curve: finest box scale exceeds the grid resolution");
  std::vector<SpectrumPoint> out;
  for (double b : beta_grid) {
    const auto ls = level_set(field, b, tolerance);
    out.push_back({b, setlib::box_dimension(ls.members, m_lo, m_hi), 1.0 - b * p.value(), ls.count()});
  }
  return out;
}

inline io::CsvTable spectrum_csv(std::span<const SpectrumPoint> curve) {
  io::CsvTable t({"beta", "dimension", "r2", "theory"});
  for (const auto& pt : curve)
    t.add_row({io::format_number(pt.beta), io::format_number(pt.dimension.slope), io::format_number(pt.dimension.r2),
               io::format_number(pt.theory)});
  return t;
}

}  // namespace fdl
