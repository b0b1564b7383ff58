#pragma once

#include <cmath>

#include "fdl/core/error.hpp"

namespace fdl::setlib {

/// Gauge phi(s) = s^(1-beta) / log(1/s)^nu attached to the power law tau(s) = s^beta.
struct GaugeSpec {
  double beta = 0.0;
  double nu = 4.0;

  GaugeSpec(double beta_, double nu_) : beta(beta_), nu(nu_) {
    require(beta >= 0.0 && beta <= 1.0, "GaugeSpec: beta must lie in [0, 1]");
    require(nu > 3.0, "GaugeSpec: nu must exceed 3");
  }
};

inline double gauge_eval(const GaugeSpec& g, double s) {
  require(s > 0.0 && s < 0.5, "gauge_eval: s must lie in (0, 1/2)");
  return std::pow(s, 1.0 - g.beta) / std::pow(std::log(1.0 / s), g.nu);
}

}  // namespace fdl::setlib
