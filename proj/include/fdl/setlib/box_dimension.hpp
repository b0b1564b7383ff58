#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fdl/core/error.hpp"
#include "fdl/core/fit.hpp"

namespace fdl::setlib {

using MembershipOracle = std::function<bool(double)>;

struct BoxDimEstimate {
  double slope = 0.0;  ///< dimension estimate, clamped to [0, 1]
  double r2 = 1.0;
  std::vector<int> scales;            ///< exponents m, boxes of size 2^-m
  std::vector<std::int64_t> counts;   ///< occupied (dilated) boxes per scale
  bool empty = false;
};

namespace detail {

inline void check_scales(int m_lo, int m_hi) {
  require(4 <= m_lo && m_lo < m_hi && m_hi <= 20, "box_dimension: need 4 <= m_lo < m_hi <= 20");
}

/// Occupied boxes of size 2^-m given occupancy at the finer resolution 2^-S.
/// A box counts when it or one of its two neighbours (cyclically) meets the set.
inline std::int64_t dilated_count(std::span<const std::uint8_t> fine, int S, int m) {
  const std::size_t boxes = std::size_t{1} << m;
  const std::size_t per_box = std::size_t{1} << (S - m);
  std::vector<std::uint8_t> occ(boxes, 0);
  for (std::size_t b = 0; b < boxes; ++b) {
    const auto* first = fine.data() + b * per_box;
    occ[b] = std::any_of(first, first + per_box, [](std::uint8_t v) { return v != 0; });
  }
  std::int64_t n = 0;
  for (std::size_t b = 0; b < boxes; ++b) {
    if (occ[b] || occ[(b + 1) % boxes] || occ[(b + boxes - 1) % boxes]) ++n;
  }
  return n;
}

inline std::vector<std::uint8_t> sample_oracle(const MembershipOracle& oracle, int S) {
  const std::size_t n = std::size_t{1} << S;
  std::vector<std::uint8_t> fine(n);
  for (std::size_t i = 0; i < n; ++i) fine[i] = oracle(std::ldexp(static_cast<double>(i), -S)) ? 1 : 0;
  return fine;
}

}  // namespace detail

/// Fits log N(m) against m log 2.
inline BoxDimEstimate box_dimension_from_counts(std::vector<int> scales, std::vector<std::int64_t> counts) {
  require(scales.size() == counts.size() && scales.size() >= 2, "box_dimension: need at least two scales");
  BoxDimEstimate est;
  est.scales = std::move(scales);
  est.counts = std::move(counts);
  if (est.counts.front() == 0) {
    est.empty = true;
    return est;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < est.scales.size(); ++i) {
    x.push_back(est.scales[i] * std::log(2.0));
    y.push_back(std::log(static_cast<double>(std::max<std::int64_t>(est.counts[i], 1))));
  }
  const auto fit = least_squares(x, y);
  est.slope = std::clamp(fit.slope, 0.0, 1.0);
  est.r2 = fit.r2;
  return est;
}

/// Box dimension of a set given by its occupancy on the grid i / 2^S.
inline BoxDimEstimate box_dimension(std::span<const std::uint8_t> fine, int m_lo, int m_hi) {
  detail::check_scales(m_lo, m_hi);
  const int S = std::countr_zero(fine.size());
  require(fine.size() == (std::size_t{1} << S) && S >= m_hi, "box_dimension: occupancy grid must be 2^S with S >= m_hi");
  std::vector<int> scales;
  std::vector<std::int64_t> counts;
  for (int m = m_lo; m <= m_hi; ++m) {
    scales.push_back(m);
    counts.push_back(detail::dilated_count(fine, S, m));
  }
  return box_dimension_from_counts(std::move(scales), std::move(counts));
}

/// Box dimension of a set given by a membership predicate. The predicate is
/// sampled on the dyadic grid of resolution 2^-sample_exponent (default:
/// max(m_hi + 4, 20)), so sets must be resolvable at that resolution.
inline BoxDimEstimate box_dimension(const MembershipOracle& oracle, int m_lo, int m_hi, int sample_exponent = 0) {
  detail::check_scales(m_lo, m_hi);
  const int S = sample_exponent > 0 ? sample_exponent : std::max(m_hi + 4, 20);
  require(S >= m_hi && S <= 26, "box_dimension: sample exponent must lie in [m_hi, 26]");
  const auto fine = detail::sample_oracle(oracle, S);
  return box_dimension(std::span<const std::uint8_t>(fine), m_lo, m_hi);
}

/// Scale-matched cover: at scale m the set is oracle_for_scale(m). This is
/// how limsup sets are read at finite depth, each scale seeing the member of
/// the family whose pieces have the box size.
inline BoxDimEstimate box_dimension_multiscale(const std::function<MembershipOracle(int)>& oracle_for_scale, int m_lo,
                                               int m_hi, int refine = 4) {
  detail::check_scales(m_lo, m_hi);
  std::vector<int> scales;
  std::vector<std::int64_t> counts;
  for (int m = m_lo; m <= m_hi; ++m) {
    const int S = m + refine;
    const auto fine = detail::sample_oracle(oracle_for_scale(m), S);
    scales.push_back(m);
    counts.push_back(detail::dilated_count(fine, S, m));
  }
  return box_dimension_from_counts(std::move(scales), std::move(counts));
}

}  // namespace fdl::setlib
