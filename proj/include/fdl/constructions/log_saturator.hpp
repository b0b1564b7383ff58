#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fdl/constructions/certificate.hpp"
#include "fdl/constructions/holo.hpp"
#include "fdl/core/error.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/trig_poly.hpp"

namespace fdl {

/// Smallest admissible rate (log log n) / (4 pi log n).
inline double log_saturator_floor(Frequency n) {
  require(n >= 3, "log_saturator_floor: n must be >= 3");
  const double L = std::log(static_cast<double>(n));
  return std::log(L) / (4.0 * std::numbers::pi * L);
}

/// omega_n = exp(4 pi (log n) eps_n).
inline double log_saturator_omega(Frequency n, double eps) {
  return std::exp(4.0 * std::numbers::pi * std::log(static_cast<double>(n)) * eps);
}

/// Largest k with 2 pi k omega <= n.
inline long log_saturator_teeth(Frequency n, double omega) {
  return static_cast<long>(std::floor(static_cast<double>(n) / (2.0 * std::numbers::pi * omega)));
}

struct LogSaturator {
  Frequency n = 0;
  double eps_requested = 0.0;
  double eps = 0.0;  ///< rate actually used, max(requested, floor)
  bool floored = false;
  double omega = 0.0;
  long k = 0;
  std::size_t grid = 0;
  /// sum of |coefficients| of log f at negative frequencies, relative to ||g||_2
  double negative_mass = 0.0;
  TrigPoly poly;  ///< P_n, spectrum in [1, 2n - 1]

  HoloKernelParams kernel() const { return HoloKernelParams(k, omega); }
  setlib::CombParams comb() const { return setlib::CombParams(k, omega); }
  double bound() const { return eps * std::log(static_cast<double>(n)); }
};

inline std::size_t log_saturator_grid(Frequency n, const HoloKernelParams& params) {
  return std::max(log_lift_min_grid(params), next_power_of_two(static_cast<std::size_t>(64 * std::max<Frequency>(n, params.k()))));
}

/// P_n = (2/pi) e_n Im(sigma_n g_n), g_n the boundary values of log f for
/// (k_n, omega_n). Rates below the floor are raised to it and flagged.
inline LogSaturator log_saturator(Frequency n, double eps_n, std::size_t M = 0, unsigned threads = 0) {
  require(n >= 16, "log_saturator: n must be >= 16");
  require(eps_n > 0.0 && std::isfinite(eps_n), "log_saturator: rate must be positive");
  LogSaturator out;
  out.n = n;
  out.eps_requested = eps_n;
  const double floor = log_saturator_floor(n);
  out.floored = eps_n < floor;
  out.eps = std::max(eps_n, floor);
  out.omega = log_saturator_omega(n, out.eps);
  out.k = log_saturator_teeth(n, out.omega);
  if (out.k < 3)
    throw precondition_error("log_saturator: n=" + std::to_string(n) + " too small, 2 pi k omega_n <= n fails for k = 3");
  const HoloKernelParams params(out.k, out.omega);
  out.grid = std::max(M, log_saturator_grid(n, params));
  require(is_power_of_two(out.grid), "log_saturator: grid size must be a power of two");

  const auto g = log_lift(params, out.grid, threads);
  const auto h = coefficients(g);
  out.negative_mass = negative_frequency_mass(h) / lp_norm(g, NormExponent(2.0));

  // Coefficient of Im(sigma_n g) at k is (a_k - conj(a_-k)) / 2i with a = sigma_n g.
  std::vector<Term> terms;
  const double nd = static_cast<double>(n);
  const Complex two_i(0.0, 2.0);
  for (Frequency k = -(n - 1); k <= n - 1; ++k) {
    const double w = 1.0 - static_cast<double>(std::abs(k)) / nd;
    const Complex c = w * (h.coeff(k) - std::conj(h.coeff(-k))) / two_i;
    terms.push_back({k + n, (2.0 / std::numbers::pi) * c});
  }
  out.poly = TrigPoly::from_terms(std::move(terms));
  return out;
}

namespace detail {
/// Smallest |g| over the grid points of the comb.
inline double min_modulus_on_comb(const GridSignal& g, const setlib::CombParams& comb) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (setlib::comb_membership(comb, g.point(i))) m = std::min(m, std::abs(g[i]));
  return m;
}

inline std::size_t comb_points(std::size_t M, const setlib::CombParams& comb) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < M; ++i) c += setlib::comb_membership(comb, static_cast<double>(i) / static_cast<double>(M));
  return c;
}
}  // namespace detail

/// ||P_n||_inf on the grid; min |S_n P_n| over the comb grid points against eps_n log n.
inline Certificate certify_log_saturator(const LogSaturator& ls, std::size_t M = 0) {
  const std::size_t grid = std::max(M, ls.grid);
  const auto sup = lp_norm(sample(ls.poly, grid), NormExponent::infinity());
  const auto sn = sample(partial_sum(ls.poly, ls.n), grid);
  return Certificate::make(sup, detail::min_modulus_on_comb(sn, ls.comb()), ls.bound());
}

struct ResidualWitness {
  Frequency j = 0;
  double eta = 0.0;
  double eps = 0.0;
  LogSaturator saturator;  ///< P_j
  TrigPoly h;              ///< g + (eta/eps) e_j P_j
};

/// h_j = g + (eta_j/eps_j) e_j P_j for g of degree <= j.
inline ResidualWitness residual_witness(const TrigPoly& g, Frequency j, double eta, double eps, std::size_t M = 0,
                                        unsigned threads = 0) {
  require(j >= 16, "residual_witness: j must be >= 16");
  if (g.degree() > j)
    throw precondition_error("residual_witness: spectral overlap, degree(g)=" + std::to_string(g.degree()) +
                             " exceeds j=" + std::to_string(j));
  require(eta > 0.0 && std::isfinite(eta), "residual_witness: eta must be positive");
  require(eps >= log_saturator_floor(j), "residual_witness: eps must be at least the floor rate (log log j)/(4 pi log j)");
  ResidualWitness w;
  w.j = j;
  w.eta = eta;
  w.eps = eps;
  w.saturator = log_saturator(j, eps, M, threads);
  w.h = g + modulate(w.saturator.poly, j) * Complex(eta / eps);
  return w;
}

/// min |S_2j h - S_j h| over the comb grid points against eta log j.
inline Certificate certify_witness(const ResidualWitness& w) {
  const auto block = partial_sum(w.h, 2 * w.j) - partial_sum(w.h, w.j);
  const auto s = sample(block, w.saturator.grid);
  return Certificate::make(lp_norm(sample(w.h, w.saturator.grid), NormExponent::infinity()),
                           detail::min_modulus_on_comb(s, w.saturator.comb()),
                           w.eta * std::log(static_cast<double>(w.j)));
}

}  // namespace fdl
