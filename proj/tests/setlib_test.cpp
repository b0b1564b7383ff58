#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fdl/core/random.hpp"
#include "fdl/setlib/approx.hpp"
#include "fdl/setlib/box_dimension.hpp"
#include "fdl/setlib/comb.hpp"
#include "fdl/setlib/dyadic.hpp"
#include "fdl/setlib/gauge.hpp"
#include "fdl/setlib/limsup.hpp"

using namespace fdl;
using namespace fdl::setlib;

namespace {

// Depth-limited middle-thirds construction, read off ternary digits.
bool in_cantor(double x, int depth) {
  for (int i = 0; i < depth; ++i) {
    const double d = std::floor(x * 3.0);
    if (d == 1.0) return false;
    x = x * 3.0 - d;
  }
  return true;
}

// Brute-force distance to the closest k / 2^j.
double brute_dyadic_distance(double x, int j) {
  double best = 1.0;
  const double step = std::ldexp(1.0, -j);
  for (long k = 0; k <= (1L << j); ++k) best = std::min(best, std::abs(x - k * step));
  return best;
}

}  // namespace

TEST(DyadicFamily, ParamsAndRejection) {
  DyadicFamilyParams p(6, 2.0);
  EXPECT_EQ(p.coarse(), 4);
  EXPECT_EQ(DyadicFamily(p).count(), 16);
  for (const auto& iv : DyadicFamily(p).intervals()) EXPECT_DOUBLE_EQ(iv.length(), std::ldexp(1.0, -5));
  EXPECT_THROW(DyadicFamilyParams(4, 2.0), precondition_error);
  EXPECT_EQ(DyadicFamilyParams::min_level(2.0), 5);
  EXPECT_EQ(DyadicFamilyParams::min_level(1.5), 7);
  EXPECT_THROW(DyadicFamilyParams(10, 1.0), precondition_error);
}

TEST(DyadicFamily, MeasureInclusionAndDisjointness) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    for (int j = DyadicFamilyParams::min_level(alpha); j <= 16; ++j) {
      DyadicFamily fam(DyadicFamilyParams(j, alpha));
      EXPECT_DOUBLE_EQ(fam.measure(), std::ldexp(1.0, fam.params().coarse() - j + 1));
      EXPECT_TRUE(fam.contains(0.0));
      // Doubled intervals: half-width 2^(1-j) must stay below half the spacing 2^(-J-1).
      EXPECT_LE(2.0 * fam.params().half_width(), std::ldexp(1.0, -fam.params().coarse() - 1));
      // Monte-Carlo measure on a fine grid agrees with the closed form.
      const int S = j + 4;
      long in = 0, in_doubled = 0;
      for (long i = 0; i < (1L << S); ++i) {
        const double x = (i + 0.5) * std::ldexp(1.0, -S);
        const bool a = fam.contains(x), b = fam.contains_doubled(x);
        in += a;
        in_doubled += b;
        if (a) EXPECT_TRUE(b);
      }
      EXPECT_DOUBLE_EQ(in * std::ldexp(1.0, -S), fam.measure());
      EXPECT_DOUBLE_EQ(in_doubled * std::ldexp(1.0, -S), fam.doubled_measure());
    }
  }
}

TEST(DyadicFamily, CentersSatisfyApproximationInequality) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    DyadicFamily fam(DyadicFamilyParams(20, alpha));
    const int J = fam.params().coarse();
    for (std::int64_t K = 0; K < fam.count(); K += 7)
      EXPECT_LE(std::abs(fam.center(K) - std::ldexp(static_cast<double>(K), -J)), std::exp2(-alpha * J));
  }
}

TEST(Comb, MembershipAndMeasure) {
  CombParams c(10, 3.0);
  EXPECT_TRUE(comb_membership(c, 2.0 / 10));
  EXPECT_FALSE(comb_membership(c, 1.0 / 20));
  EXPECT_DOUBLE_EQ(c.measure(), 1.0 / 3.0);
  EXPECT_THROW(CombParams(2, 3.0), precondition_error);
  EXPECT_THROW(CombParams(5, 1.0), precondition_error);

  Rng rng(99);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += comb_membership(c, uniform01(rng));
  const double est = static_cast<double>(hits) / n;
  const double se = std::sqrt(c.measure() * (1 - c.measure()) / n);
  EXPECT_LT(std::abs(est - c.measure()), 3 * se);
}

TEST(ApproxExponent, Examples) {
  EXPECT_TRUE(std::isinf(dyadic_approx_exponent(3.0 / 8.0, 10)));
  EXPECT_NEAR(dyadic_approx_exponent(1.0 / 3.0, 40), 1.0, 0.05);
  double liouville = 0.0;
  long fact = 1;
  for (int m = 1; m <= 5; ++m) {
    fact *= m;
    if (fact < 1000) liouville += std::ldexp(1.0, -static_cast<int>(fact));
  }
  EXPECT_GE(dyadic_approx_exponent(liouville, 40), 4.0);
  EXPECT_THROW(dyadic_approx_exponent(0.3, 3), precondition_error);
}

TEST(ApproxExponent, LevelDistanceMatchesBruteForce) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = uniform01(rng);
    for (int j : {4, 9, 15}) {
      const double d = brute_dyadic_distance(x, j);
      EXPECT_NEAR(level_approx_exponent(x, j), (-std::log2(d) - 1.0) / j, 1e-9);
      EXPECT_GE(level_approx_exponent(x, j), 1.0 - 1e-12);
    }
  }
}

TEST(ApproxExponent, NondecreasingAsWindowExtends) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const double x = uniform01(rng);
    double prev = 0.0;
    for (int hi = 4; hi <= 40; ++hi) {
      const double v = dyadic_approx_exponent(x, 4, hi);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(BoxDimension, ReferenceSets) {
  auto full = box_dimension([](double) { return true; }, 4, 10);
  EXPECT_NEAR(full.slope, 1.0, 0.02);
  auto point = box_dimension([](double x) { return x == 0.0; }, 4, 10);
  EXPECT_NEAR(point.slope, 0.0, 0.02);
  auto cantor = box_dimension([](double x) { return in_cantor(x, 10); }, 4, 10);
  EXPECT_NEAR(cantor.slope, std::log(2.0) / std::log(3.0), 0.05);
  EXPECT_GT(cantor.r2, 0.99);
}

TEST(BoxDimension, EmptySet) {
  auto e = box_dimension([](double) { return false; }, 4, 12);
  EXPECT_TRUE(e.empty);
  EXPECT_EQ(e.slope, 0.0);
  EXPECT_EQ(e.r2, 1.0);
  EXPECT_THROW(box_dimension([](double) { return false; }, 3, 12), precondition_error);
  EXPECT_THROW(box_dimension([](double) { return false; }, 8, 8), precondition_error);
}

TEST(BoxDimension, MonotoneUnderInclusion) {
  auto small = [](double x) { return in_cantor(x, 8) && x < 0.5; };
  auto big = [](double x) { return in_cantor(x, 6); };
  auto a = box_dimension(small, 4, 12);
  auto b = box_dimension(big, 4, 12);
  for (std::size_t i = 0; i < a.counts.size(); ++i) EXPECT_LE(a.counts[i], b.counts[i]);
}

TEST(BoxDimension, DyadicLimsupCover) {
  auto est = box_dimension_multiscale(dyadic_limsup_cover(2.0), 6, 18);
  EXPECT_NEAR(est.slope, 0.5, 0.1);
}

TEST(Gauge, ClosedForm) {
  const double s = std::exp(-1.0);
  EXPECT_NEAR(gauge_eval(GaugeSpec(0.0, 4.0), s), s, 1e-15);
  EXPECT_NEAR(gauge_eval(GaugeSpec(1.0, 4.0), s), 1.0, 1e-15);
  EXPECT_THROW(gauge_eval(GaugeSpec(0.5, 4.0), 0.5), precondition_error);
  EXPECT_THROW(gauge_eval(GaugeSpec(0.5, 4.0), 0.0), precondition_error);
  EXPECT_THROW(GaugeSpec(0.5, 3.0), precondition_error);
  // Nondecreasing below exp(-nu/(1-beta)).
  for (double beta : {0.0, 0.3, 0.7}) {
    GaugeSpec g(beta, 4.0);
    const double top = std::exp(-4.0 / (1.0 - beta));
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double v = gauge_eval(g, top * i / 200.0);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Limsup, HitCounts) {
  auto fam = dyadic_family_sets(2.0);
  EXPECT_EQ(limsup_membership(fam, 0.0, 8, 16), 9);
  EXPECT_EQ(limsup_membership([](int, double) { return false; }, 0.3, 8, 16), 0);
  // K/2^4 is a center of I_j exactly when floor(j/2)+1 >= 4.
  int expected = 0;
  for (int j = 8; j <= 16; ++j) expected += (j / 2 + 1 >= 4);
  EXPECT_EQ(limsup_membership(fam, 3.0 / 16.0, 8, 16), expected);
  EXPECT_EQ(expected, 9);
  EXPECT_THROW(limsup_membership(fam, 0.0, 9, 8), precondition_error);
}

TEST(TestPoints, CentersAndPerturbations) {
  auto pts = dyadic_test_points(3, 2.0);
  ASSERT_EQ(pts.size(), 24u);
  EXPECT_EQ(pts[0], 0.0);
  EXPECT_DOUBLE_EQ(pts[2], std::ldexp(1.0, -7));
  EXPECT_DOUBLE_EQ(pts[1], 1.0 - std::ldexp(1.0, -7));
}
