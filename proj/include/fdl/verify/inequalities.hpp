#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fdl/constructions/saturator.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/parallel.hpp"
#include "fdl/core/random.hpp"
#include "fdl/core/trig_poly.hpp"
#include "fdl/verify/report.hpp"

namespace fdl::verify {

namespace detail {

/// Powers e^(2 pi i j/M), j < M.
inline std::vector<Complex> roots_of_unity(std::size_t M) {
  std::vector<Complex> tab(M);
  for (std::size_t j = 0; j < M; ++j) tab[j] = unit_exponential(static_cast<Frequency>(j), 1.0 / static_cast<double>(M));
  return tab;
}

inline void require_nonzero(const TrigPoly& f, const char* op) {
  if (f.empty()) throw precondition_error(std::string(op) + ": zero polynomial");
}

}  // namespace detail

/// Values of f at x0 + i dx for i < count, stepping each exponential by a
/// fixed rotation.
inline std::vector<Complex> evaluate_on_progression(const TrigPoly& f, double x0, double dx, std::size_t count) {
  std::vector<Complex> out(count);
  for (const auto& t : f.terms()) {
    Complex z = t.c * unit_exponential(t.k, x0);
    const Complex step = unit_exponential(t.k, dx);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] += z;
      z *= step;
    }
  }
  return out;
}

/// Grid quadrature of max_{2 <= n <= N} |S_n f(x)| / (log n)^(1+a), divided by ||f||_1.
/// Partial sums are advanced one frequency pair at a time on the grid; powers
/// of e_1 are re-read from the root table every 64 steps to cap drift.
inline double check_weak_maximal(const TrigPoly& f, std::int64_t N, double a, std::size_t M = 0) {
  require(N >= 2, "check_weak_maximal: N must be >= 2");
  require(a > 0.0, "check_weak_maximal: excess exponent must be positive");
  detail::require_nonzero(f, "check_weak_maximal");
  if (M == 0) M = grid_size_for_degree(std::max<Frequency>(f.degree(), 1), 64);
  require(is_power_of_two(M), "check_weak_maximal: grid size must be a power of two");
  if (static_cast<std::size_t>(2 * f.degree()) >= M)
    throw aliasing_error("check_weak_maximal: degree(f) must be below M/2");

  const auto tab = detail::roots_of_unity(M);
  const std::int64_t top = std::min<std::int64_t>(N, std::max<Frequency>(f.degree(), 2));
  // Per frequency pair: c_n z + c_-n conj(z) = (sr + i si) Re z + (-di + i dr) Im z.
  const auto count = static_cast<std::size_t>(top) + 1;
  std::vector<double> sr(count), si(count), dr(count), di(count), w(count, 0.0);
  for (std::int64_t n = 1; n <= top; ++n) {
    const Complex cp = f.coeff(n), cm = f.coeff(-n);
    const auto k = static_cast<std::size_t>(n);
    sr[k] = cp.real() + cm.real();
    si[k] = cp.imag() + cm.imag();
    dr[k] = cp.real() - cm.real();
    di[k] = cp.imag() - cm.imag();
    if (n >= 2) w[k] = std::pow(std::log(static_cast<double>(n)), -2.0 * (1.0 + a));
  }
  const Complex c0 = f.coeff(0);
  // The grid is processed in cache-sized chunks, each running through every n.
  constexpr std::size_t kChunk = 1024;
  const std::size_t B = std::min(M, kChunk);
  std::vector<double> tr(B), ti(B), ar(B), ai(B), zr(B), zi(B), best(B);
  double integral = 0.0;
  for (std::size_t m0 = 0; m0 < M; m0 += B) {
    for (std::size_t m = 0; m < B; ++m) {
      tr[m] = tab[m0 + m].real();
      ti[m] = tab[m0 + m].imag();
    }
    std::fill(ar.begin(), ar.end(), c0.real());
    std::fill(ai.begin(), ai.end(), c0.imag());
    std::fill(best.begin(), best.end(), 0.0);
    for (std::int64_t n = 1; n <= top; ++n) {
      const auto k = static_cast<std::size_t>(n);
      if ((n - 1) % 64 == 0) {
        for (std::size_t m = 0; m < B; ++m) {
          const Complex z = tab[(k * (m0 + m)) & (M - 1)];
          zr[m] = z.real();
          zi[m] = z.imag();
        }
      } else {
        for (std::size_t m = 0; m < B; ++m) {
          const double r = zr[m] * tr[m] - zi[m] * ti[m];
          zi[m] = zr[m] * ti[m] + zi[m] * tr[m];
          zr[m] = r;
        }
      }
      const double a_r = sr[k], a_i = si[k], b_r = -di[k], b_i = dr[k], wk = w[k];
      for (std::size_t m = 0; m < B; ++m) {
        const double re = ar[m] + a_r * zr[m] + b_r * zi[m];
        const double im = ai[m] + a_i * zr[m] + b_i * zi[m];
        ar[m] = re;
        ai[m] = im;
        best[m] = std::max(best[m], (re * re + im * im) * wk);
      }
    }
    for (double b : best) integral += std::sqrt(b);
  }
  integral /= static_cast<double>(M);
  return integral / lp_norm(sample(f, M), NormExponent(1.0));
}

/// ||P||_q / (n^(1/p - 1/q) ||P||_p), n = degree(P) (1 for constants).
inline double check_nikolsky(const TrigPoly& P, const NormExponent& p, const NormExponent& q, std::size_t M = 0) {
  require(p.value() <= q.value(), "check_nikolsky: need p <= q");
  detail::require_nonzero(P, "check_nikolsky");
  const auto n = static_cast<double>(std::max<Frequency>(P.degree(), 1));
  const auto g = sample(P, std::max(M, grid_size_for_degree(P.degree(), 64)));
  return lp_norm(g, q) / (std::pow(n, p.reciprocal() - q.reciprocal()) * lp_norm(g, p));
}

/// ||(S_n f)'||_inf / ((log n) n^(1 + 1/p) ||f||_p). The sup is read on a grid
/// of 32 points per period of the top frequency, within 0.5% of the true sup.
inline double check_derivative_bound(const TrigPoly& f, std::int64_t n, const NormExponent& p, std::size_t M = 0) {
  require(n >= 2, "check_derivative_bound: n must be >= 2");
  detail::require_nonzero(f, "check_derivative_bound");
  const std::size_t grid =
      std::max(M, next_power_of_two(static_cast<std::size_t>(32 * std::max<Frequency>(f.degree(), n))));
  const double top = lp_norm(sample(derivative(partial_sum(f, n)), grid), NormExponent::infinity());
  const double nd = static_cast<double>(n);
  return top / (std::log(nd) * std::pow(nd, 1.0 + p.reciprocal()) * lp_norm(sample(f, grid), p));
}

/// Rate factor R of the localization bound.
inline double localization_rate(std::int64_t n, double interval_length, const NormExponent& p, double eps) {
  const double L = std::log(static_cast<double>(n));
  if (p.value() > 1.0) return std::pow(L, -(1.0 + eps) * p.reciprocal());
  return std::pow(L, -(1.0 + eps)) / std::log(1.0 / interval_length);
}

/// ||P||_{L^p(I)} / (|P(a)| |I|^(1/p) R) for I centred at a. The L^p(I) norm
/// is a midpoint rule with `nodes` points.
inline double check_localization(const TrigPoly& P, double a, double interval_length, const NormExponent& p, double eps,
                                 std::int64_t n = 0, std::size_t nodes = 512) {
  require(!p.is_infinite(), "check_localization: p must be finite");
  require(eps > 0.0, "check_localization: eps must be positive");
  detail::require_nonzero(P, "check_localization");
  if (n == 0) n = std::max<Frequency>(P.degree(), 2);
  require(n >= 2 && P.degree() <= n, "check_localization: need degree(P) <= n and n >= 2");
  require(interval_length > 0.0 && interval_length <= 1.0 / static_cast<double>(n) * (1 + 1e-12),
          "check_localization: |I| must lie in (0, 1/n]");
  const double peak = std::abs(P(a));
  const double norm_p = lp_norm(P, p, grid_size_for_degree(P.degree(), 64));
  if (peak < norm_p * (1.0 - 1e-12))
    throw precondition_error("check_localization: hypothesis |P(a)| >= ||P||_p fails (" + io::format_number(peak) +
                             " < " + io::format_number(norm_p) + ")");
  const double h = interval_length / static_cast<double>(nodes);
  const auto vals = evaluate_on_progression(P, a - 0.5 * interval_length + 0.5 * h, h, nodes);
  double acc = 0.0;
  for (const auto& v : vals) acc += std::pow(std::abs(v), p.value());
  const double local = std::pow(acc * h, p.reciprocal());
  return local / (peak * std::pow(interval_length, p.reciprocal()) * localization_rate(n, interval_length, p, eps));
}

/// Grid point where |P| is largest.
inline double argmax_on_grid(const TrigPoly& P, std::size_t M) {
  const auto g = sample(P, M);
  std::size_t best = 0;
  for (std::size_t m = 1; m < g.size(); ++m)
    if (std::abs(g[m]) > std::abs(g[best])) best = m;
  return g.point(best);
}

namespace detail {

template <class RowFn>
VerificationReport run_sweep(const std::string& name, std::int64_t N, int trials, std::uint64_t seed,
                             BoundDirection direction, unsigned threads, RowFn&& row) {
  require(trials >= 1, name + ": need at least one trial");
  VerificationReport rep;
  rep.name = name;
  rep.trials = trials;
  rep.seed = seed;
  rep.direction = direction;
  const auto scales = dyadic_scales(N);
  rep.rows.resize(static_cast<std::size_t>(trials) * scales.size());
  parallel_for(
      rep.rows.size(),
      [&](std::size_t i) {
        const auto trial = static_cast<std::int64_t>(i / scales.size());
        const auto scale = scales[i % scales.size()];
        const auto tseed = trial_seed(seed, static_cast<std::uint64_t>(trial));
        rep.rows[i] = {trial, tseed, scale, row(trial, tseed, scale)};
      },
      threads);
  rep.summarize();
  return rep;
}

}  // namespace detail

/// Rademacher polynomials on [-N', N'] for each dyadic scale N' <= N.
inline VerificationReport sweep_weak_maximal(std::int64_t N, double a, int trials, std::uint64_t seed,
                                             unsigned threads = 0) {
  require(N >= 4, "sweep_weak_maximal: N must be >= 4");
  auto rep = detail::run_sweep("maximal", N, trials, seed, BoundDirection::Upper, threads,
                               [&](std::int64_t, std::uint64_t s, std::int64_t scale) {
                                 Rng rng(s);
                                 return check_weak_maximal(rademacher_poly(-scale, scale, rng), scale, a);
                               });
  rep.assert_scale_stability();
  return rep;
}

/// Nikolsky ratios on Rademacher polynomials; ratios must stay below 3.
inline VerificationReport sweep_nikolsky(std::int64_t N, const NormExponent& p, const NormExponent& q, int trials,
                                         std::uint64_t seed, unsigned threads = 0) {
  auto rep = detail::run_sweep("nikolsky", N, trials, seed, BoundDirection::Upper, threads,
                               [&](std::int64_t, std::uint64_t s, std::int64_t scale) {
                                 Rng rng(s);
                                 return check_nikolsky(rademacher_poly(-scale, scale, rng), p, q);
                               });
  rep.assert_limit(3.0, "Nikolsky ratio above the tolerance factor 3");
  rep.assert_scale_stability();
  return rep;
}

/// Derivative bound on Rademacher polynomials of degree n; bounded by twice
/// the constant fitted at the smallest scale.
inline VerificationReport sweep_derivative(std::int64_t N, const NormExponent& p, int trials, std::uint64_t seed,
                                           unsigned threads = 0) {
  auto rep = detail::run_sweep("derivative", N, trials, seed, BoundDirection::Upper, threads,
                               [&](std::int64_t, std::uint64_t s, std::int64_t scale) {
                                 Rng rng(s);
                                 return check_derivative_bound(rademacher_poly(-scale, scale, rng), scale, p);
                               });
  rep.assert_limit(2.0 * rep.fitted_constant, "derivative ratio above twice the fitted constant");
  rep.assert_scale_stability();
  return rep;
}

/// Minimum accepted localization ratio.
inline constexpr double kLocalizationDelta = 0.01;

/// Test family at scale n. Trial 0 is D_n at 0, trial 1 the saturator P_j
/// (2^(j+1) <= n, alpha = 2) at the center 0, later trials are Rademacher
/// polynomials on [-n, n] at their grid maximum. Even trials use |I| = 1/n,
/// odd ones |I| = 1/(2n); trial 2i and 2i+1 share the polynomial.
inline double localization_trial(std::int64_t trial, std::uint64_t seed, std::int64_t n, const NormExponent& p,
                                 double eps) {
  const std::int64_t member = trial / 2;
  const double shrink = trial % 2 == 0 ? 1.0 : 0.5;
  const double length = shrink / static_cast<double>(n);
  if (member == 0) return check_localization(dirichlet_kernel(n), 0.0, length, p, eps, n);
  if (member == 1) {
    int j = 0;
    while ((std::int64_t{2} << (j + 1)) <= n) ++j;
    const setlib::DyadicFamilyParams params(std::max(j, setlib::DyadicFamilyParams::min_level(2.0)), 2.0);
    const auto pj = saturator_pj(params, p, std::size_t{16} << params.level());
    // Below the smallest admissible level the saturator has degree above n.
    const std::int64_t deg = std::max<std::int64_t>(n, pj.degree());
    return check_localization(pj, 0.0, shrink / static_cast<double>(deg), p, eps, deg);
  }
  Rng rng(seed);
  const auto P = rademacher_poly(-n, n, rng);
  return check_localization(P, argmax_on_grid(P, grid_size_for_degree(n, 64)), length, p, eps, n);
}

/// D_n, P_j and `random_members` random polynomials, each at |I| = 1/n and 1/(2n).
inline VerificationReport sweep_localization(std::int64_t N, const NormExponent& p, double eps, int random_members,
                                             std::uint64_t seed, unsigned threads = 0) {
  require(random_members >= 0, "sweep_localization: random member count must be nonnegative");
  const int trials = 2 * (2 + random_members);
  // Random members draw from the seed of their even trial so both interval lengths see the same polynomial.
  auto rep = detail::run_sweep("localization", N, trials, seed, BoundDirection::Lower, threads,
                               [&](std::int64_t trial, std::uint64_t, std::int64_t scale) {
                                 const auto s = trial_seed(seed, static_cast<std::uint64_t>(trial - trial % 2));
                                 return localization_trial(trial, s, scale, p, eps);
                               });
  for (auto& row : rep.rows) row.seed = trial_seed(seed, static_cast<std::uint64_t>(row.trial - row.trial % 2));
  rep.assert_limit(kLocalizationDelta, "localization ratio below delta");
  return rep;
}

}  // namespace fdl::verify
