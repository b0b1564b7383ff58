#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fdl/core/error.hpp"

namespace fdl {

using Frequency = std::int64_t;
using Complex = std::complex<double>;

/// Coefficients with modulus below this are dropped from canonical form.
inline constexpr double kPruneThreshold = 1e-15;

/// e_k(t) = exp(2 pi i k t), with the phase reduced mod 1 before scaling.
inline Complex unit_exponential(Frequency k, double t) {
  const double x = static_cast<double>(k) * t;
  const double frac = x - std::floor(x);
  const double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

struct Term {
  Frequency k = 0;
  Complex c{};

  friend bool operator==(const Term&, const Term&) = default;
};

/// Half-open frequency range (lo, hi].
struct SpectrumInterval {
  Frequency lo = 0;
  Frequency hi = 0;

  SpectrumInterval() = default;
  SpectrumInterval(Frequency lo_, Frequency hi_) : lo(lo_), hi(hi_) {
    require(lo <= hi, "SpectrumInterval: lo must not exceed hi");
  }
  bool contains(Frequency k) const { return lo < k && k <= hi; }
  friend bool operator==(const SpectrumInterval&, const SpectrumInterval&) = default;
};

/// Exponent of an L^p norm: p in [1, inf) or infinity.
class NormExponent {
 public:
  explicit NormExponent(double p) : p_(p) {
    require(p >= 1.0, "NormExponent: p must be >= 1");
  }
  static NormExponent infinity() { return NormExponent(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(p_); }
  double value() const { return p_; }
  /// 1/p, which is 0 for p = infinity.
  double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / p_; }

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p_); }

 private:
  double p_;
};

/// Sparse trigonometric polynomial sum_k c_k e_k in canonical form:
/// frequencies strictly increasing, no coefficient below kPruneThreshold.
class TrigPoly {
 public:
  TrigPoly() = default;

  /// Sorts, merges repeated frequencies, and prunes.
  static TrigPoly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.k < b.k; });
    TrigPoly out;
    out.terms_.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size();) {
      Term merged = terms[i++];
      while (i < terms.size() && terms[i].k == merged.k) merged.c += terms[i++].c;
      if (std::abs(merged.c) >= kPruneThreshold) out.terms_.push_back(merged);
    }
    return out;
  }

  static TrigPoly monomial(Frequency k, Complex c = 1.0) { return from_terms({{k, c}}); }
  static TrigPoly constant(Complex c) { return monomial(0, c); }

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Max |k| over stored frequencies; 0 for the zero polynomial.
  Frequency degree() const {
    if (terms_.empty()) return 0;
    return std::max(std::abs(terms_.front().k), std::abs(terms_.back().k));
  }
  Frequency min_frequency() const { return terms_.empty() ? 0 : terms_.front().k; }
  Frequency max_frequency() const { return terms_.empty() ? 0 : terms_.back().k; }

  Complex coeff(Frequency k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, Frequency key) { return t.k < key; });
    return (it != terms_.end() && it->k == k) ? it->c : Complex{};
  }

  /// Direct evaluation at a point of the torus.
  Complex operator()(double t) const {
    Complex acc{};
    for (const auto& term : terms_) acc += term.c * unit_exponential(term.k, t);
    return acc;
  }

  /// Sum of squared coefficient moduli (the L^2 norm squared by Parseval).
  double energy() const {
    double e = 0.0;
    for (const auto& term : terms_) e += std::norm(term.c);
    return e;
  }

  bool spectrum_within(const SpectrumInterval& iv) const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return iv.contains(t.k); });
  }

  TrigPoly& operator+=(const TrigPoly& other) {
    std::vector<Term> all(terms_);
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    *this = from_terms(std::move(all));
    return *this;
  }
  TrigPoly& operator-=(const TrigPoly& other) { return *this += other * Complex(-1.0); }
  TrigPoly& operator*=(Complex s) {
    for (auto& t : terms_) t.c *= s;
    *this = from_terms(std::move(terms_));
    return *this;
  }

  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, Complex s) { return a *= s; }
  friend TrigPoly operator*(Complex s, TrigPoly a) { return a *= s; }
  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

 private:
  std::vector<Term> terms_;
};

/// D_n(t) = sum_{|k|<=n} e_k(t) = sin(pi (2n+1) t) / sin(pi t).
inline double dirichlet_eval(Frequency n, double t) {
  require(n >= 0, "dirichlet_eval: n must be nonnegative");
  // D_n has period 1 because 2n+1 is odd.
  const double u = t - std::floor(t);
  const double s = std::sin(std::numbers::pi * u);
  if (std::abs(s) < 1e-12) return static_cast<double>(2 * n + 1);
  const double num = std::sin(std::numbers::pi * std::fmod(static_cast<double>(2 * n + 1) * u, 2.0));
  return num / s;
}

inline TrigPoly dirichlet_kernel(Frequency n) {
  require(n >= 0, "dirichlet_kernel: n must be nonnegative");
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(2 * n + 1));
  for (Frequency k = -n; k <= n; ++k) terms.push_back({k, 1.0});
  return TrigPoly::from_terms(std::move(terms));
}

/// S_n f: keep frequencies |k| <= n.
inline TrigPoly partial_sum(const TrigPoly& f, Frequency n) {
  require(n >= 0, "partial_sum: n must be nonnegative");
  std::vector<Term> kept;
  for (const auto& t : f.terms())
    if (std::abs(t.k) <= n) kept.push_back(t);
  return TrigPoly::from_terms(std::move(kept));
}

/// Fejer mean sigma_n f: coefficient k scaled by max(0, 1 - |k|/n).
inline TrigPoly fejer_mean(const TrigPoly& f, Frequency n) {
  require(n >= 1, "fejer_mean: n must be positive");
  std::vector<Term> kept;
  for (const auto& t : f.terms()) {
    if (std::abs(t.k) >= n) continue;
    const double w = 1.0 - static_cast<double>(std::abs(t.k)) / static_cast<double>(n);
    kept.push_back({t.k, t.c * w});
  }
  return TrigPoly::from_terms(std::move(kept));
}

/// Multiplication by e_k: shifts the spectrum by k.
inline TrigPoly modulate(const TrigPoly& f, Frequency k) {
  std::vector<Term> shifted(f.terms().begin(), f.terms().end());
  for (auto& t : shifted) t.k += k;
  return TrigPoly::from_terms(std::move(shifted));
}

/// Exact derivative: coefficient k scaled by 2 pi i k.
inline TrigPoly derivative(const TrigPoly& f) {
  std::vector<Term> out(f.terms().begin(), f.terms().end());
  for (auto& t : out) t.c *= Complex(0.0, 2.0 * std::numbers::pi * static_cast<double>(t.k));
  return TrigPoly::from_terms(std::move(out));
}

/// S_n f(t) for every n in `ns` from a single pass over the terms.
inline std::vector<Complex> partial_sums_at(const TrigPoly& f, double t, std::span<const Frequency> ns) {
  const auto terms = f.terms();
  std::vector<Complex> prefix(terms.size() + 1);
  for (std::size_t i = 0; i < terms.size(); ++i)
    prefix[i + 1] = prefix[i] + terms[i].c * unit_exponential(terms[i].k, t);
  auto index_of = [&](Frequency key, bool upper) {
    auto cmp_lo = [](const Term& a, Frequency b) { return a.k < b; };
    auto cmp_hi = [](Frequency b, const Term& a) { return b < a.k; };
    return upper ? std::upper_bound(terms.begin(), terms.end(), key, cmp_hi) - terms.begin()
                 : std::lower_bound(terms.begin(), terms.end(), key, cmp_lo) - terms.begin();
  };
  std::vector<Complex> out;
  out.reserve(ns.size());
  for (Frequency n : ns) {
    const auto hi = index_of(n, true);
    const auto lo = index_of(-n, false);
    out.push_back(hi > lo ? prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]
                          : Complex{});
  }
  return out;
}

}  // namespace fdl
