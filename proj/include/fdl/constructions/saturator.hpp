#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fdl/constructions/certificate.hpp"
#include "fdl/core/error.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/parallel.hpp"
#include "fdl/core/trig_poly.hpp"
#include "fdl/setlib/dyadic.hpp"

namespace fdl {

namespace detail {

inline void require_grid(std::size_t M, std::size_t at_least, const std::string& op) {
  require(is_power_of_two(M), op + ": grid size must be a power of two");
  require(M >= at_least, op + ": grid size " + std::to_string(M) + " too coarse, need at least " + std::to_string(at_least));
}

/// Exact Fourier coefficient of the bump: the periodisation over K/2^J of a
/// trapezoid with plateau half-width a = 2^-j and foot half-width b = 2a.
inline double bump_coefficient(const setlib::DyadicFamilyParams& params, Frequency k) {
  const Frequency period = Frequency{1} << params.coarse();
  if (k % period != 0) return 0.0;
  const double a = params.half_width();
  const double b = 2.0 * a;
  const double scale = static_cast<double>(period);
  if (k == 0) return scale * (a + b);
  const double w = std::numbers::pi * static_cast<double>(k);
  return scale * std::sin(w * (a + b)) * std::sin(w * (b - a)) / ((b - a) * w * w);
}

/// Smallest |g| over the grid points of the family set. Centers K/2^J and
/// the half-width 2^-j are whole grid steps once M >= 2^j.
inline double min_modulus_on_family(const GridSignal& g, const setlib::DyadicFamilyParams& params) {
  const std::size_t M = g.size();
  require(M >= (std::size_t{1} << params.level()), "min_modulus_on_family: grid finer than 2^-j required");
  const std::size_t step = M >> params.coarse();
  const std::size_t half = M >> params.level();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < M; c += step) {
    for (std::size_t d = 0; d <= 2 * half; ++d) m = std::min(m, std::abs(g[(c + M - half + d) % M]));
  }
  return m;
}

}  // namespace detail

/// Continuous piecewise linear chi_j: 1 on the family set I_j, 0 outside the
/// doubled intervals, slope 2^j in between.
inline GridSignal bump_chi(const setlib::DyadicFamilyParams& params, std::size_t M) {
  detail::require_grid(M, std::size_t{8} << params.level(), "bump_chi");
  const setlib::DyadicFamily fam(params);
  const double inv_h = std::ldexp(1.0, params.level());
  return GridSignal::from_function(M, [&](double x) {
    return Complex(std::clamp(2.0 - fam.distance_to_centers(x) * inv_h, 0.0, 1.0), 0.0);
  });
}

/// Amplitude 2^-(J-j+2)/p of P_j.
inline double saturator_amplitude(const setlib::DyadicFamilyParams& params, const NormExponent& p) {
  return std::exp2(-static_cast<double>(params.coarse() - params.level() + 2) * p.reciprocal());
}

/// P_j = 2^-(J-j+2)/p e_{2^j} sigma_{2^j} chi_j, built from the exact bump
/// coefficients; spectrum in (0, 2^(j+1) - 1].
inline TrigPoly saturator_pj(const setlib::DyadicFamilyParams& params, const NormExponent& p, std::size_t M) {
  detail::require_grid(M, std::size_t{16} << params.level(), "saturator_pj");
  const Frequency n = Frequency{1} << params.level();
  const Frequency period = Frequency{1} << params.coarse();
  const double amp = saturator_amplitude(params, p);
  std::vector<Term> terms;
  for (Frequency k = -n + period; k < n; k += period) {
    const double fejer = 1.0 - static_cast<double>(std::abs(k)) / static_cast<double>(n);
    terms.push_back({k + n, amp * fejer * detail::bump_coefficient(params, k)});
  }
  return TrigPoly::from_terms(std::move(terms));
}

/// ||P_j||_p on the grid and min |P_j| over the I_j grid points against
/// 2^-(J-j+2)/p / 4.
inline Certificate certify_saturator(const TrigPoly& pj, const setlib::DyadicFamilyParams& params, const NormExponent& p,
                                     std::size_t M) {
  detail::require_grid(M, std::size_t{16} << params.level(), "certify_saturator");
  const auto g = sample(pj, M);
  return Certificate::make(lp_norm(g, p), detail::min_modulus_on_family(g, params),
                           0.25 * saturator_amplitude(params, p));
}

/// Spectral block (m, n] of g_r carrying (1/j^2) e_m P_j.
struct FamilyBlock {
  int j = 0;
  int r = 0;
  Frequency m = 0;
  Frequency n = 0;
};

/// The truncated g_1..g_s with their block table.
struct SaturatorFamily {
  int s = 0;
  double alpha = 0.0;
  NormExponent p{1.0};
  int jmin = 0;
  int jmax = 0;
  std::size_t grid = 0;
  std::vector<TrigPoly> members;   ///< members[r - 1] = g_r
  std::vector<FamilyBlock> blocks; ///< ordered by j, then r
  /// Upper bound on the L^p norm of the discarded levels j > jmax.
  double tail_bound = 0.0;

  /// C with n_{j,r} <= C 2^j for all blocks.
  Frequency block_constant() const { return 2 * (2 * static_cast<Frequency>(s) + 1); }

  const TrigPoly& member(int r) const {
    require(r >= 1 && r <= s, "SaturatorFamily: member index out of range");
    return members[static_cast<std::size_t>(r - 1)];
  }

  const FamilyBlock& block(int j, int r) const {
    require(j >= jmin && j <= jmax && r >= 1 && r <= s, "SaturatorFamily: block index out of range");
    return blocks[static_cast<std::size_t>((j - jmin) * s + (r - 1))];
  }
};

/// m_{j,r} = (s + r) 2^(j+1).
inline Frequency block_start(int s, int j, int r) { return static_cast<Frequency>(s + r) << (j + 1); }
/// n_{j,r} = m_{j,r} + 2^(j+1) - 1.
inline Frequency block_end(int s, int j, int r) { return block_start(s, j, r) + (Frequency{1} << (j + 1)) - 1; }

/// sum_{j > jmax} 1/j^2, with an Euler-Maclaurin remainder.
inline double inverse_square_tail(int jmax) {
  constexpr int cutoff = 100000;
  double sum = 0.0;
  for (int j = cutoff; j > jmax; --j) sum += 1.0 / (static_cast<double>(j) * j);
  const double N = cutoff;
  return sum + 1.0 / N - 0.5 / (N * N) + 1.0 / (6.0 * N * N * N);
}

/// g_r = sum_{j_alpha <= j <= jmax} (1/j^2) e_{(s+r)2^(j+1)} P_j for r = 1..s.
inline SaturatorFamily disjoint_family(int s, double alpha, const NormExponent& p, int jmax, std::size_t M,
                                       unsigned threads = 0) {
  require(s >= 1 && s <= 64, "disjoint_family: s must lie in [1, 64]");
  const int jmin = setlib::DyadicFamilyParams::min_level(alpha);
  require(jmax >= jmin && jmax <= 30,
          "disjoint_family: jmax must lie in [j_alpha, 30] with j_alpha = " + std::to_string(jmin));
  require(is_power_of_two(M), "disjoint_family: grid size must be a power of two");
  const auto top = static_cast<std::size_t>(2 * s) << (jmax + 2);
  if (top >= M / 2)
    throw precondition_error("disjoint_family: spectrum overflows the grid, need (2s) 2^(jmax+2) < M/2 = " +
                             std::to_string(M / 2));

  const int levels = jmax - jmin + 1;
  std::vector<TrigPoly> saturators(static_cast<std::size_t>(levels));
  parallel_for(
      saturators.size(),
      [&](std::size_t i) {
        const setlib::DyadicFamilyParams params(jmin + static_cast<int>(i), alpha);
        saturators[i] = saturator_pj(params, p, std::size_t{16} << params.level());
      },
      threads);

  SaturatorFamily fam;
  fam.s = s;
  fam.alpha = alpha;
  fam.p = p;
  fam.jmin = jmin;
  fam.jmax = jmax;
  fam.grid = M;
  fam.tail_bound = inverse_square_tail(jmax);
  for (int j = jmin; j <= jmax; ++j)
    for (int r = 1; r <= s; ++r) fam.blocks.push_back({j, r, block_start(s, j, r), block_end(s, j, r)});
  for (int r = 1; r <= s; ++r) {
    std::vector<Term> terms;
    for (int j = jmin; j <= jmax; ++j) {
      const double w = 1.0 / (static_cast<double>(j) * j);
      for (const auto& t : saturators[static_cast<std::size_t>(j - jmin)].terms())
        terms.push_back({t.k + block_start(s, j, r), w * t.c});
    }
    fam.members.push_back(TrigPoly::from_terms(std::move(terms)));
  }
  return fam;
}

/// Per-block check: min over the I_j grid points of |S_n g_r - S_m g_r|
/// against (C/j^2) 2^((j-J)/p), C = 2^(-2/p)/4.
struct BlockCertificate {
  FamilyBlock block;
  double min_modulus = 0.0;
  double bound = 0.0;
};

inline double family_block_bound(const setlib::DyadicFamilyParams& params, const NormExponent& p) {
  const double j = params.level();
  const double C = 0.25 * std::exp2(-2.0 * p.reciprocal());
  return C / (j * j) * std::exp2((params.level() - params.coarse()) * p.reciprocal());
}

inline TrigPoly extract_block(const TrigPoly& g, const FamilyBlock& b) { return partial_sum(g, b.n) - partial_sum(g, b.m); }

inline std::vector<BlockCertificate> certify_family_blocks(const SaturatorFamily& fam, unsigned threads = 0) {
  std::vector<BlockCertificate> out(fam.blocks.size());
  parallel_for(
      out.size(),
      [&](std::size_t i) {
        const auto& b = fam.blocks[i];
        const setlib::DyadicFamilyParams params(b.j, fam.alpha);
        const auto block = sample(extract_block(fam.member(b.r), b), std::size_t{16} << b.j);
        out[i] = {b, detail::min_modulus_on_family(block, params), family_block_bound(params, fam.p)};
      },
      threads);
  return out;
}

/// Summary over all blocks, normalised by (1/j^2) 2^((j-J)/p) so that the
/// bound is the constant C; the norm is max_r ||g_r||_p on the family grid.
inline Certificate certify_family(const SaturatorFamily& fam, const std::vector<BlockCertificate>& blocks) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) worst = std::min(worst, b.min_modulus / b.bound);
  double norm = 0.0;
  for (const auto& g : fam.members) norm = std::max(norm, lp_norm(sample(g, fam.grid), fam.p));
  const double C = 0.25 * std::exp2(-2.0 * fam.p.reciprocal());
  return Certificate::make(norm, worst * C, C);
}

}  // namespace fdl
