#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fdl/core/error.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/parallel.hpp"
#include "fdl/core/trig_poly.hpp"
#include "fdl/setlib/comb.hpp"

namespace fdl {

/// k teeth, sharpness omega >= log k, eps = 1/(omega k), nodes z_j = e^(2 pi i j/k).
class HoloKernelParams {
 public:
  HoloKernelParams(long k, double omega) : k_(k), omega_(omega) {
    require(k >= 3, "HoloKernelParams: k must be >= 3");
    require(omega > 1.0, "HoloKernelParams: omega must exceed 1");
    require(omega >= std::log(static_cast<double>(k)),
            "HoloKernelParams: omega=" + std::to_string(omega) + " is below log k=" +
                std::to_string(std::log(static_cast<double>(k))));
    conj_nodes_.reserve(static_cast<std::size_t>(k));
    for (long j = 0; j < k; ++j) conj_nodes_.push_back(unit_exponential(-j, 1.0 / static_cast<double>(k)));
  }

  long k() const { return k_; }
  double omega() const { return omega_; }
  double epsilon() const { return 1.0 / (omega_ * static_cast<double>(k_)); }
  Complex node(long j) const { return std::conj(conj_nodes_.at(static_cast<std::size_t>(j))); }
  std::span<const Complex> conj_nodes() const { return conj_nodes_; }
  setlib::CombParams comb() const { return setlib::CombParams(k_, omega_); }

 private:
  long k_;
  double omega_;
  std::vector<Complex> conj_nodes_;
};

namespace detail {
inline void require_closed_disk(Complex z, const char* op) {
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw precondition_error(std::string(op) + ": |z| must be <= 1");
}
}  // namespace detail

/// f(z) = (1/k) sum_j (1 + eps) / (1 + eps - conj(z_j) z).
inline Complex holo_kernel(const HoloKernelParams& params, Complex z) {
  detail::require_closed_disk(z, "holo_kernel");
  const double a = 1.0 + params.epsilon();
  Complex sum{};
  for (const auto& w : params.conj_nodes()) sum += 1.0 / (a - w * z);
  return sum * (a / static_cast<double>(params.k()));
}

/// f'/f as the ratio sum_j conj(z_j)/(1+eps-conj(z_j) z)^2 over sum_j 1/(1+eps-conj(z_j) z).
inline Complex holo_log_derivative(const HoloKernelParams& params, Complex z) {
  detail::require_closed_disk(z, "holo_log_derivative");
  const double a = 1.0 + params.epsilon();
  Complex num{}, den{};
  for (const auto& w : params.conj_nodes()) {
    const Complex r = 1.0 / (a - w * z);
    den += r;
    num += w * r * r;
  }
  return num / den;
}

/// f at the boundary point e^(2 pi i x).
inline Complex holo_boundary(const HoloKernelParams& params, double x) {
  return holo_kernel(params, unit_exponential(1, x));
}

/// Smallest grid for which the boundary values of log f are resolved: the
/// Taylor coefficients decay like (1+eps)^-m, so M/2 must cover many multiples
/// of omega k as well as 64 k.
inline std::size_t log_lift_min_grid(const HoloKernelParams& params) {
  const double need = std::max(64.0 * static_cast<double>(params.k()), 32.0 * params.omega() * static_cast<double>(params.k()));
  return next_power_of_two(static_cast<std::size_t>(std::ceil(need)));
}

/// Boundary values g(x) = Log f(e^(2 pi i x)), principal branch.
inline GridSignal log_lift(const HoloKernelParams& params, std::size_t M, unsigned threads = 0) {
  require(is_power_of_two(M), "log_lift: grid size must be a power of two");
  require(M >= log_lift_min_grid(params),
          "log_lift: grid size must be at least " + std::to_string(log_lift_min_grid(params)));
  std::vector<Complex> s(M);
  constexpr std::size_t chunk = 4096;
  parallel_for(
      (M + chunk - 1) / chunk,
      [&](std::size_t c) {
        const std::size_t end = std::min(M, (c + 1) * chunk);
        for (std::size_t m = c * chunk; m < end; ++m)
          s[m] = std::log(holo_boundary(params, static_cast<double>(m) / static_cast<double>(M)));
      },
      threads);
  return GridSignal(std::move(s));
}

/// Sum of |c_k| over negative frequencies.
inline double negative_frequency_mass(const TrigPoly& coeffs) {
  double mass = 0.0;
  for (const auto& t : coeffs.terms())
    if (t.k < 0) mass += std::abs(t.c);
  return mass;
}

}  // namespace fdl
