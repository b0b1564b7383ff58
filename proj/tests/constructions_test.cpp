#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fdl/constructions/holo.hpp"
#include "fdl/constructions/log_saturator.hpp"
#include "fdl/constructions/saturator.hpp"
#include "fdl/core/random.hpp"

using namespace fdl;
using setlib::DyadicFamilyParams;

namespace {

double max_coeff_diff(const TrigPoly& a, const TrigPoly& b) {
  double d = 0.0;
  for (const auto& t : a.terms()) d = std::max(d, std::abs(t.c - b.coeff(t.k)));
  for (const auto& t : b.terms()) d = std::max(d, std::abs(t.c - a.coeff(t.k)));
  return d;
}

// Geometric-series form of the holomorphic kernel: 1 / (1 - (z/(1+eps))^k).
Complex kernel_closed_form(const HoloKernelParams& p, Complex z) {
  const Complex w = std::pow(z / (1.0 + p.epsilon()), static_cast<double>(p.k()));
  return 1.0 / (1.0 - w);
}

// Taylor coefficients of log f: (1+eps)^(-k m) / m at frequency k m.
TrigPoly log_kernel_series(const HoloKernelParams& p, Frequency max_freq) {
  std::vector<Term> terms;
  for (Frequency m = 1; m * p.k() <= max_freq; ++m)
    terms.push_back({m * p.k(), std::pow(1.0 + p.epsilon(), -static_cast<double>(m * p.k())) / static_cast<double>(m)});
  return TrigPoly::from_terms(std::move(terms));
}

}  // namespace

TEST(BumpChi, ShapeAndSupport) {
  const DyadicFamilyParams params(8, 2.0);
  const std::size_t M = std::size_t{1} << 14;
  const auto chi = bump_chi(params, M);
  const setlib::DyadicFamily fam(params);
  double mean = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double v = chi[m].real();
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    mean += v;
    const double d = fam.distance_to_centers(chi.point(m));
    if (d <= params.half_width()) EXPECT_EQ(v, 1.0);
    if (d >= 2.0 * params.half_width()) EXPECT_EQ(v, 0.0);
    const double slope = std::abs(chi[(m + 1) % M].real() - v) * static_cast<double>(M);
    EXPECT_LE(slope, std::ldexp(1.0, params.level()) * (1 + 1e-9));
  }
  EXPECT_LE(mean / static_cast<double>(M), std::ldexp(1.0, params.coarse() - params.level() + 2));
  for (std::int64_t K = 0; K < fam.count(); ++K) EXPECT_EQ(chi[static_cast<std::size_t>(K) * (M >> params.coarse())].real(), 1.0);
  EXPECT_THROW(bump_chi(params, M / 64), precondition_error);
}

TEST(BumpChi, ClosedFormCoefficientsMatchFft) {
  const DyadicFamilyParams params(6, 2.0);
  const auto fft = coefficients(bump_chi(params, std::size_t{1} << 18));
  for (Frequency k = -200; k <= 200; ++k)
    EXPECT_NEAR(detail::bump_coefficient(params, k), fft.coeff(k).real(), 1e-8) << "k=" << k;
}

TEST(SaturatorPj, SpectrumAndNorm) {
  const DyadicFamilyParams params(10, 2.0);
  const auto pj = saturator_pj(params, NormExponent(1.0), std::size_t{1} << 14);
  EXPECT_TRUE(pj.spectrum_within(SpectrumInterval(0, 2047)));
  EXPECT_GT(pj.min_frequency(), 0);
  const auto cert = certify_saturator(pj, params, NormExponent(1.0), std::size_t{1} << 14);
  EXPECT_LE(cert.norm, 1.0);
  EXPECT_TRUE(cert.holds());
  EXPECT_THROW(saturator_pj(params, NormExponent(1.0), std::size_t{1} << 13), precondition_error);
}

// Independent route: FFT of the sampled bump, Fejer mean on the grid, modulation.
TEST(SaturatorPj, AgreesWithGridPipeline) {
  for (double alpha : {1.5, 3.0}) {
    const DyadicFamilyParams params(9, alpha);
    const NormExponent p(2.0);
    const auto chi = bump_chi(params, std::size_t{1} << 20);
    const auto pipeline =
        modulate(fejer_mean(chi, Frequency{1} << params.level()), Frequency{1} << params.level()) *
        Complex(saturator_amplitude(params, p));
    EXPECT_LT(max_coeff_diff(pipeline, saturator_pj(params, p, std::size_t{1} << 13)), 1e-7);
  }
}

TEST(SaturatorPj, CertificateSweepAndGridStability) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    for (double pv : {1.0, 2.0}) {
      for (int j : {8, 11}) {
        const DyadicFamilyParams params(j, alpha);
        const NormExponent p(pv);
        const std::size_t M = std::size_t{16} << j;
        const auto pj = saturator_pj(params, p, M);
        const auto a = certify_saturator(pj, params, p, M);
        const auto b = certify_saturator(pj, params, p, 2 * M);
        EXPECT_LE(a.norm, 1.0 + 1e-9);
        EXPECT_TRUE(a.holds()) << "alpha=" << alpha << " p=" << pv << " j=" << j;
        EXPECT_LT(std::abs(a.norm - b.norm), 0.01 * b.norm);
        EXPECT_LT(std::abs(a.min_on_target_set - b.min_on_target_set), 0.01 * b.min_on_target_set);
      }
    }
  }
}

TEST(DisjointFamily, BlocksAreDisjointAndBounded) {
  const auto fam = disjoint_family(3, 2.0, NormExponent(2.0), 12, std::size_t{1} << 18);
  EXPECT_EQ(fam.block_constant(), 14);
  for (const auto& b : fam.blocks) {
    EXPECT_GE(b.m, 1);
    EXPECT_LT(b.m, b.n);
    EXPECT_LE(b.n, fam.block_constant() << b.j);
    if (b.r < fam.s) EXPECT_LT(b.n, fam.block(b.j, b.r + 1).m);
    if (b.r == fam.s && b.j < fam.jmax) EXPECT_LT(b.n, fam.block(b.j + 1, 1).m);
  }
  for (int r = 1; r <= 3; ++r)
    for (int q = r + 1; q <= 3; ++q)
      for (const auto& t : fam.member(r).terms()) EXPECT_EQ(fam.member(q).coeff(t.k), Complex(0.0));
  EXPECT_NEAR(fam.tail_bound, 1.0 / 12.0 - 1.0 / (2.0 * 144) + 1.0 / (6.0 * 1728), 1e-4);
  EXPECT_THROW(disjoint_family(3, 2.0, NormExponent(2.0), 12, std::size_t{1} << 17), precondition_error);
}

TEST(DisjointFamily, BlockExtractionIsExact) {
  const NormExponent p(2.0);
  const auto fam = disjoint_family(3, 2.0, p, 11, std::size_t{1} << 17);
  for (int j = fam.jmin; j <= fam.jmax; ++j) {
    const DyadicFamilyParams params(j, 2.0);
    const auto pj = saturator_pj(params, p, std::size_t{16} << j);
    for (int r = 1; r <= 3; ++r) {
      const auto& b = fam.block(j, r);
      const auto expected = modulate(pj, b.m) * Complex(1.0 / (static_cast<double>(j) * j));
      EXPECT_LT(max_coeff_diff(extract_block(fam.member(r), b), expected), 1e-16);
    }
  }
}

TEST(DisjointFamily, BlockLowerBoundOnFamilySet) {
  const auto fam = disjoint_family(3, 2.0, NormExponent(2.0), 10, std::size_t{1} << 16);
  const auto& b = fam.block(10, 1);
  const auto block = sample(extract_block(fam.member(1), b), std::size_t{1} << 16);
  const double min_mod = detail::min_modulus_on_family(block, DyadicFamilyParams(10, 2.0));
  EXPECT_GE(min_mod, (1.0 / 400.0) * std::exp2((10 - 6) / 2.0) * 0.5 / 4.0);
  const auto certs = certify_family_blocks(fam);
  for (const auto& c : certs) EXPECT_GE(c.min_modulus, c.bound) << "j=" << c.block.j << " r=" << c.block.r;
  EXPECT_TRUE(certify_family(fam, certs).holds());
}

TEST(HoloKernel, ValuesAndClosedForm) {
  const HoloKernelParams params(16, std::log(16.0));
  EXPECT_NEAR(std::abs(holo_kernel(params, 0.0) - 1.0), 0.0, 1e-15);
  Rng rng(41);
  for (int i = 0; i < 500; ++i) {
    const Complex z = std::polar(std::sqrt(uniform01(rng)), 2 * std::numbers::pi * uniform01(rng));
    const Complex f = holo_kernel(params, z);
    EXPECT_GT(f.real(), 0.0);
    EXPECT_LT(std::abs(f - kernel_closed_form(params, z)), 1e-10 * std::abs(f));
  }
  EXPECT_THROW(holo_kernel(params, 1.01), precondition_error);
  EXPECT_THROW(HoloKernelParams(16, 2.0), precondition_error);
  EXPECT_THROW(HoloKernelParams(2, 3.0), precondition_error);
}

TEST(HoloKernel, LogDerivativeMatchesDifferentiatedClosedForm) {
  const HoloKernelParams params(32, 4.0);
  const double a = 1.0 + params.epsilon();
  const double k = static_cast<double>(params.k());
  for (double x : {0.0, 0.0011, 0.13, 0.5, 0.77}) {
    const Complex z = unit_exponential(1, x);
    const Complex w = z / a;
    const Complex expected = k * std::pow(w, k - 1) / (a * (1.0 - std::pow(w, k)));
    EXPECT_LT(std::abs(holo_log_derivative(params, z) - expected), 1e-9 * std::abs(expected));
    EXPECT_LE(std::abs(holo_log_derivative(params, z)), params.omega() * k * (1 + 1e-12));
  }
}

TEST(HoloKernel, ConstantsOnCombAndCircle) {
  const HoloKernelParams params(16, std::log(16.0));
  const auto comb = params.comb();
  const std::size_t M = std::size_t{1} << 14;
  double min_comb = 1e300, max_all = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double x = static_cast<double>(m) / static_cast<double>(M);
    const double v = std::abs(holo_boundary(params, x));
    max_all = std::max(max_all, v);
    if (setlib::comb_membership(comb, x)) min_comb = std::min(min_comb, v);
  }
  EXPECT_GE(min_comb / params.omega(), 0.2);
  EXPECT_LE(max_all / params.omega(), 10.0);
}

TEST(LogLift, MeanBranchAndAnalyticity) {
  const HoloKernelParams params(16, std::log(16.0));
  const std::size_t M = std::size_t{1} << 14;
  const auto g = log_lift(params, M);
  Complex mean{};
  for (std::size_t m = 0; m < M; ++m) {
    EXPECT_LE(std::abs(g[m].imag()), std::numbers::pi / 2);
    mean += g[m];
  }
  EXPECT_LT(std::abs(mean / static_cast<double>(M)), 1e-6);
  const auto h = coefficients(g);
  EXPECT_LE(negative_frequency_mass(h), 1e-6 * lp_norm(g, NormExponent(2.0)));
  EXPECT_LT(max_coeff_diff(partial_sum(h, 2000), log_kernel_series(params, 2000)), 1e-10);
  EXPECT_THROW(log_lift(params, 512), precondition_error);
}

TEST(LogSaturator, FloorAndDerivedParameters) {
  const Frequency n = 1 << 12;
  const auto ls = log_saturator(n, 1e-6);
  EXPECT_TRUE(ls.floored);
  EXPECT_NEAR(ls.omega, std::log(static_cast<double>(n)), 1e-9);
  EXPECT_LE(2 * std::numbers::pi * ls.k * ls.omega, static_cast<double>(n));
  EXPECT_GT(2 * std::numbers::pi * (ls.k + 1) * ls.omega, static_cast<double>(n));
  EXPECT_FALSE(log_saturator(n, 0.04).floored);
  EXPECT_THROW(log_saturator(n, 0.2), precondition_error);
  EXPECT_THROW(log_saturator(64, 0.01), precondition_error);
}

TEST(LogSaturator, SpectrumNormAndLowerBound) {
  const Frequency n = 1 << 12;
  const auto ls = log_saturator(n, log_saturator_floor(n), std::size_t{1} << 18);
  EXPECT_TRUE(ls.poly.spectrum_within(SpectrumInterval(0, 2 * n - 1)));
  EXPECT_LE(ls.negative_mass, 1e-6);
  const auto cert = certify_log_saturator(ls);
  EXPECT_LE(cert.norm, 1.0 + 1e-9);
  EXPECT_GE(cert.min_on_target_set / ls.bound(), 1.0);
}

// |S_n P_n| = |sigma_n g_n| / pi, with sigma_n g_n built from the Taylor series of log f.
TEST(LogSaturator, PartialSumMatchesSeriesOracle) {
  const Frequency n = 1 << 11;
  const auto ls = log_saturator(n, log_saturator_floor(n));
  const auto sigma = fejer_mean(log_kernel_series(ls.kernel(), n), n);
  const auto sn = partial_sum(ls.poly, n);
  for (double x : {0.0, 0.01, 0.3, 0.55, 0.9}) {
    EXPECT_NEAR(std::abs(sn(x)), std::abs(sigma(x)) / std::numbers::pi, 1e-8);
  }
}

TEST(ResidualWitness, ZeroSeedAndBlockIdentity) {
  const Frequency j = 1 << 10;
  const double eps = log_saturator_floor(j);
  const auto w0 = residual_witness(TrigPoly(), j, 0.5 * eps, eps);
  EXPECT_LT(max_coeff_diff(w0.h, modulate(w0.saturator.poly, j) * Complex(0.5)), 1e-16);

  Rng rng(77);
  const auto g = rademacher_poly(-j, j, rng);
  const auto w = residual_witness(g, j, 0.5 * eps, eps);
  const auto block = partial_sum(w.h, 2 * j) - partial_sum(w.h, j);
  EXPECT_LT(max_coeff_diff(block, modulate(partial_sum(w.saturator.poly, j), j) * Complex(0.5)), 1e-16);
  EXPECT_THROW(residual_witness(rademacher_poly(-j - 1, j, rng), j, eps, eps), precondition_error);
  EXPECT_THROW(residual_witness(TrigPoly(), j, eps, 0.5 * eps), precondition_error);
}

TEST(ResidualWitness, CombLowerBound) {
  const Frequency j = 1 << 12;
  const double eps = log_saturator_floor(j);
  const auto w = residual_witness(TrigPoly(), j, eps, eps);
  EXPECT_TRUE(certify_witness(w).holds());
}
