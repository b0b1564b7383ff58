#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fdl/core/fit.hpp"
#include "fdl/core/grid.hpp"
#include "fdl/core/io.hpp"
#include "fdl/core/random.hpp"
#include "fdl/core/trig_poly.hpp"

using namespace fdl;

namespace {

TrigPoly random_complex_poly(Frequency degree, Rng& rng) {
  std::vector<Term> terms;
  for (Frequency k = -degree; k <= degree; ++k) terms.push_back({k, {uniform(rng, -1, 1), uniform(rng, -1, 1)}});
  return TrigPoly::from_terms(std::move(terms));
}

// Averaged form of the Fejer mean, built from partial sums only.
TrigPoly fejer_by_averaging(const TrigPoly& f, Frequency n) {
  TrigPoly acc;
  for (Frequency j = 0; j < n; ++j) acc += partial_sum(f, j);
  return acc * Complex(1.0 / static_cast<double>(n));
}

double max_coeff_diff(const TrigPoly& a, const TrigPoly& b) {
  double d = 0.0;
  for (const auto& t : a.terms()) d = std::max(d, std::abs(t.c - b.coeff(t.k)));
  for (const auto& t : b.terms()) d = std::max(d, std::abs(t.c - a.coeff(t.k)));
  return d;
}

}  // namespace

TEST(TrigPoly, CanonicalFormPrunesAndMerges) {
  auto p = TrigPoly::from_terms({{3, 1.0}, {-2, 2.0}, {3, -1.0}, {5, 1e-16}, {0, 0.5}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.terms()[0].k, -2);
  EXPECT_EQ(p.terms()[1].k, 0);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(TrigPoly().degree(), 0);
}

TEST(Dirichlet, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(dirichlet_eval(1, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(dirichlet_eval(3, 0.0), 7.0);
  EXPECT_NEAR(dirichlet_eval(2, 0.5), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(dirichlet_eval(4, 1.0), 9.0);
  for (double t : {0.013, 0.2, 0.37, 0.81}) {
    EXPECT_NEAR(dirichlet_eval(7, t), dirichlet_kernel(7)(t).real(), 1e-11);
    EXPECT_NEAR(dirichlet_eval(7, t), dirichlet_eval(7, t + 3.0), 1e-9);
  }
}

TEST(PartialSum, Truncation) {
  EXPECT_TRUE(partial_sum(TrigPoly::monomial(5), 3).empty());
  for (Frequency n : {0, 1, 7}) EXPECT_EQ(partial_sum(TrigPoly::constant(2.5), n), TrigPoly::constant(2.5));
  EXPECT_EQ(partial_sum(dirichlet_kernel(5), 2), dirichlet_kernel(2));
}

TEST(PartialSum, ProjectionPropertyOnRandomPolys) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_complex_poly(40, rng);
    const auto n = uniform_int(rng, 0, 50);
    const auto m = uniform_int(rng, 0, 50);
    EXPECT_EQ(partial_sum(partial_sum(f, m), n), partial_sum(f, std::min(n, m)));
    EXPECT_EQ(partial_sum(partial_sum(f, n), n), partial_sum(f, n));
  }
}

TEST(FejerMean, Examples) {
  EXPECT_EQ(fejer_mean(TrigPoly::constant(1.0), 1), TrigPoly::constant(1.0));
  EXPECT_EQ(fejer_mean(TrigPoly::constant(1.0), 9), TrigPoly::constant(1.0));
  EXPECT_EQ(fejer_mean(TrigPoly::monomial(2), 4), TrigPoly::monomial(2, 0.5));
  EXPECT_TRUE(fejer_mean(TrigPoly::monomial(2), 2).empty());
}

TEST(FejerMean, MultiplierMatchesAveragedPartialSums) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_complex_poly(30, rng);
    for (Frequency n : {1, 5, 31, 45}) EXPECT_LT(max_coeff_diff(fejer_mean(f, n), fejer_by_averaging(f, n)), 1e-12);
  }
}

TEST(Modulate, Shifts) {
  EXPECT_EQ(modulate(TrigPoly::monomial(0), 5), TrigPoly::monomial(5));
  auto shifted = modulate(dirichlet_kernel(2), 3);
  ASSERT_EQ(shifted.size(), 5u);
  EXPECT_EQ(shifted.min_frequency(), 1);
  EXPECT_EQ(shifted.max_frequency(), 5);
  auto f = TrigPoly::from_terms({{-3, {1, 2}}, {4, {0, -1}}});
  EXPECT_EQ(modulate(f, 0), f);
  EXPECT_EQ(modulate(f, 7).coeff(11), f.coeff(4));
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(GridSignal(std::vector<Complex>(3)), precondition_error);
  EXPECT_THROW(GridSignal(std::vector<Complex>(1)), precondition_error);
  EXPECT_NO_THROW(GridSignal(std::vector<Complex>(2)));
}

TEST(Grid, RoundTripThroughCoefficients) {
  Rng rng(3);
  auto p = random_complex_poly(60, rng);
  auto g = sample(p, 128);
  auto back = sample(coefficients(g), 128);
  double scale = lp_norm(g, NormExponent::infinity());
  for (std::size_t m = 0; m < g.size(); ++m) EXPECT_LT(std::abs(back[m] - g[m]), 1e-10 * scale);
  EXPECT_LT(max_coeff_diff(coefficients(g), p), 1e-12);
}

TEST(Grid, SampleAgreesWithDirectEvaluationAndDecimates) {
  Rng rng(8);
  auto p = random_complex_poly(100, rng);
  auto coarse = sample(p, 16);  // far below the degree: evaluated on a fine grid, then decimated
  for (std::size_t m = 0; m < coarse.size(); ++m) EXPECT_LT(std::abs(coarse[m] - p(coarse.point(m))), 1e-10);
}

TEST(Grid, PartialSumOnGridRejectsAliasing) {
  auto g = sample(dirichlet_kernel(3), 16);
  EXPECT_NO_THROW(partial_sum(g, 7));
  EXPECT_THROW(partial_sum(g, 8), aliasing_error);
  EXPECT_THROW(fejer_mean(g, 8), aliasing_error);
  EXPECT_EQ(partial_sum(g, 2).size(), 5u);
}

TEST(LpNorm, Examples) {
  auto one = sample(TrigPoly::constant(1.0), 64);
  for (double p : {1.0, 1.5, 2.0, 7.0}) EXPECT_NEAR(lp_norm(one, NormExponent(p)), 1.0, 1e-14);
  EXPECT_NEAR(lp_norm(one, NormExponent::infinity()), 1.0, 1e-14);
  EXPECT_NEAR(lp_norm(sample(TrigPoly::monomial(9), 64), NormExponent(2.0)), 1.0, 1e-13);
  for (Frequency n : {1, 4, 20}) EXPECT_NEAR(lp_norm(dirichlet_kernel(n), NormExponent(2.0)), std::sqrt(2.0 * n + 1), 1e-11);
  EXPECT_THROW(NormExponent(0.5), precondition_error);
}

TEST(LpNorm, ParsevalOnRandomPolys) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_complex_poly(uniform_int(rng, 1, 300), rng);
    const double l2 = lp_norm(p, NormExponent(2.0));
    EXPECT_NEAR(l2 * l2, p.energy(), 1e-10 * p.energy());
  }
}

// S_n f sampled on the grid equals the discrete convolution of f with D_n,
// computed by brute force from the closed-form kernel.
TEST(Grid, PartialSumIsDirichletConvolution) {
  Rng rng(23);
  const std::size_t M = 256;
  auto f = random_complex_poly(50, rng);  // degree < M/4
  auto fs = sample(f, M);
  for (Frequency n : {0, 3, 17, 49}) {
    auto sn = sample(partial_sum(f, n), M);
    for (std::size_t m = 0; m < M; m += 7) {
      Complex conv{};
      for (std::size_t q = 0; q < M; ++q) conv += fs[q] * dirichlet_eval(n, fs.point(m) - fs.point(q));
      conv /= static_cast<double>(M);
      EXPECT_LT(std::abs(conv - sn[m]), 1e-9);
    }
  }
}

TEST(LpNorm, GridRefinementConverges) {
  Rng rng(29);
  auto p = random_complex_poly(64, rng);
  for (double q : {1.0, 1.5, 3.0}) {
    const double a = lp_norm(sample(p, 512), NormExponent(q));
    const double b = lp_norm(sample(p, 2048), NormExponent(q));
    const double c = lp_norm(sample(p, 8192), NormExponent(q));
    EXPECT_LT(std::abs(b - c), std::abs(a - c) + 1e-14) << "p=" << q;
    EXPECT_LT(std::abs(b - c), 1e-4 * c) << "p=" << q;
  }
  // Even exponents are exact once the grid resolves |p|^q.
  const double e4 = lp_norm(sample(p, 512), NormExponent(4.0));
  EXPECT_NEAR(e4, lp_norm(sample(p, 4096), NormExponent(4.0)), 1e-12 * e4);
}

TEST(PartialSumsAt, MatchesTruncatedEvaluation) {
  Rng rng(31);
  auto f = random_complex_poly(40, rng);
  std::vector<Frequency> ns{0, 1, 5, 39, 40, 100};
  auto vals = partial_sums_at(f, 0.1234, ns);
  for (std::size_t i = 0; i < ns.size(); ++i) EXPECT_LT(std::abs(vals[i] - partial_sum(f, ns[i])(0.1234)), 1e-11);
}

TEST(Json, TrigPolyRoundTripAndValidation) {
  auto p = TrigPoly::from_terms({{-4, {0.25, -1.5}}, {0, 2.0}, {7, {0, 3}}});
  auto j = io::to_json(p);
  EXPECT_EQ(j["coeffs"][0][0], -4);
  EXPECT_EQ(io::trig_poly_from_json(j), p);
  io::json bad = {{"coeffs", {{2, 1.0, 0.0}, {2, 1.0, 0.0}}}};
  EXPECT_THROW(io::trig_poly_from_json(bad), std::invalid_argument);
  auto g = sample(p, 32);
  auto jg = io::to_json(g);
  EXPECT_EQ(jg["M"], 32);
  EXPECT_EQ(io::grid_signal_from_json(jg).size(), 32u);
}

TEST(Fit, ExactLineAndFlatData) {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9}, flat{2, 2, 2, 2};
  auto fit = least_squares(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.r2, 1.0, 1e-14);
  EXPECT_EQ(least_squares(x, flat).slope, 0.0);
  EXPECT_EQ(least_squares(x, flat).r2, 1.0);
}

TEST(Random, TrialStreamsAreDeterministic) {
  auto a = trial_rng(7, 3);
  auto b = trial_rng(7, 3);
  auto c = trial_rng(7, 4);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
}
