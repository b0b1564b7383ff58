#pragma once

#include <limits>

#include "fdl/core/io.hpp"

namespace fdl {

/// Finite check of a construction: a norm and the worst value on the target
/// set against the bound it must clear.
struct Certificate {
  double norm = 0.0;
  double min_on_target_set = std::numeric_limits<double>::infinity();
  double bound_required = 0.0;
  double margin = std::numeric_limits<double>::infinity();

  bool holds() const { return margin >= 0.0; }

  static Certificate make(double norm, double min_value, double bound) {
    return {norm, min_value, bound, min_value - bound};
  }
};

namespace io {
inline json to_json(const Certificate& c) {
  return {{"norm", number(c.norm)},
          {"min_on_target_set", number(c.min_on_target_set)},
          {"bound_required", number(c.bound_required)},
          {"margin", number(c.margin)}};
}
}  // namespace io

}  // namespace fdl
