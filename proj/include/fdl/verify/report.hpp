#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fdl/core/error.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/io.hpp"

namespace fdl::verify {

/// One measured ratio: trial index, its derived seed, the scale N and the value.
struct VerifyRow {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t scale = 0;
  double ratio = 0.0;
};

/// Whether the inequality bounds the ratio from above (norm inequalities)
/// or from below (localization).
enum class BoundDirection { Upper, Lower };

struct VerificationReport {
  std::string name;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  BoundDirection direction = BoundDirection::Upper;
  double worst_ratio = 0.0;
  /// Worst ratio at the smallest scale, the constant every larger scale is held to.
  double fitted_constant = 0.0;
  std::vector<std::pair<std::int64_t, double>> scale_trend;  ///< (scale, worst ratio at that scale)
  std::vector<VerifyRow> rows;
  std::vector<std::string> failures;  ///< failed assertions, empty when the check passes

  bool passed() const { return failures.empty(); }

  bool worse(double a, double b) const { return direction == BoundDirection::Upper ? a > b : a < b; }

  /// Fills worst_ratio, scale_trend and fitted_constant from the rows.
  void summarize() {
    require(!rows.empty(), "VerificationReport: no rows");
    scale_trend.clear();
    std::vector<std::int64_t> scales;
    for (const auto& r : rows) scales.push_back(r.scale);
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    for (auto s : scales) {
      double w = direction == BoundDirection::Upper ? -std::numeric_limits<double>::infinity()
                                                    : std::numeric_limits<double>::infinity();
      for (const auto& r : rows)
        if (r.scale == s && worse(r.ratio, w)) w = r.ratio;
      scale_trend.emplace_back(s, w);
    }
    worst_ratio = scale_trend.front().second;
    for (const auto& [s, w] : scale_trend)
      if (worse(w, worst_ratio)) worst_ratio = w;
    fitted_constant = scale_trend.front().second;
  }

  /// Consecutive dyadic scales must agree within `factor`.
  void assert_scale_stability(double factor = 2.0) {
    for (std::size_t i = 1; i < scale_trend.size(); ++i) {
      const double a = scale_trend[i - 1].second, b = scale_trend[i].second;
      if (!(a > 0.0 && b > 0.0 && b < factor * a && a < factor * b))
        failures.push_back("scale stability: worst ratio moves from " + io::format_number(a) + " at N=" +
                           std::to_string(scale_trend[i - 1].first) + " to " + io::format_number(b) +
                           " at N=" + std::to_string(scale_trend[i].first));
    }
  }

  /// No ratio may exceed (Upper) or undercut (Lower) the limit.
  void assert_limit(double limit, const std::string& what) {
    for (const auto& r : rows) {
      if (worse(r.ratio, limit)) {
        failures.push_back(what + ": ratio " + io::format_number(r.ratio) + " at trial " + std::to_string(r.trial) +
                           ", N=" + std::to_string(r.scale) + " against " + io::format_number(limit));
        return;
      }
    }
  }
};

/// Up to `count` dyadic scales ending at the largest power of two <= N, none below 4.
inline std::vector<std::int64_t> dyadic_scales(std::int64_t N, int count = 6) {
  require(N >= 4, "dyadic_scales: N must be >= 4");
  std::int64_t top = 4;
  while (top * 2 <= N) top *= 2;
  std::vector<std::int64_t> out;
  for (std::int64_t s = top; s >= 4 && static_cast<int>(out.size()) < count; s /= 2) out.push_back(s);
  std::reverse(out.begin(), out.end());
  return out;
}

inline io::json to_json(const VerificationReport& r) {
  io::json trend = io::json::array();
  for (const auto& [s, w] : r.scale_trend) trend.push_back({s, io::number(w)});
  return {{"name", r.name},
          {"trials", r.trials},
          {"seed", r.seed},
          {"direction", r.direction == BoundDirection::Upper ? "upper" : "lower"},
          {"worst_ratio", io::number(r.worst_ratio)},
          {"fitted_constant", io::number(r.fitted_constant)},
          {"scale_trend", trend},
          {"passed", r.passed()},
          {"failures", r.failures}};
}

inline io::CsvTable to_csv(const VerificationReport& r) {
  io::CsvTable t({"trial", "seed", "scale", "ratio"});
  for (const auto& row : r.rows)
    t.add_row({std::to_string(row.trial), std::to_string(row.seed), std::to_string(row.scale), io::format_number(row.ratio)});
  return t;
}

}  // namespace fdl::verify
