#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fdl/core/error.hpp"
#include "fdl/core/fft.hpp"
#include "fdl/core/trig_poly.hpp"

namespace fdl {

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

/// Smallest power of two >= max(value, 2).
inline std::size_t next_power_of_two(std::size_t value) {
  return std::bit_ceil(std::max<std::size_t>(value, 2));
}

/// Grid size used when sampling a polynomial of degree d: 8d rounded up to a
/// power of two, never below `at_least`.
inline std::size_t grid_size_for_degree(Frequency d, std::size_t at_least = 2) {
  return next_power_of_two(std::max<std::size_t>(static_cast<std::size_t>(8 * std::max<Frequency>(d, 1)), at_least));
}

/// Complex samples f(m/M), m = 0..M-1, on a uniform grid with M a power of two.
class GridSignal {
 public:
  explicit GridSignal(std::vector<Complex> samples) : samples_(std::move(samples)) {
    require(samples_.size() >= 2 && is_power_of_two(samples_.size()),
            "GridSignal: size must be a power of two >= 2");
  }

  std::size_t size() const { return samples_.size(); }
  std::span<const Complex> samples() const { return samples_; }
  const Complex& operator[](std::size_t m) const { return samples_[m]; }
  double point(std::size_t m) const { return static_cast<double>(m) / static_cast<double>(samples_.size()); }

  template <class F>
  static GridSignal from_function(std::size_t M, F&& fn) {
    require(M >= 2 && is_power_of_two(M), "GridSignal: size must be a power of two >= 2");
    std::vector<Complex> s(M);
    for (std::size_t m = 0; m < M; ++m) s[m] = fn(static_cast<double>(m) / static_cast<double>(M));
    return GridSignal(std::move(s));
  }

 private:
  std::vector<Complex> samples_;
};

namespace detail {

/// Frequency represented by DFT bin i on a grid of size M, in [-M/2, M/2).
inline Frequency bin_frequency(std::size_t i, std::size_t M) {
  const auto k = static_cast<Frequency>(i);
  return i < M / 2 ? k : k - static_cast<Frequency>(M);
}

inline std::size_t frequency_bin(Frequency k, std::size_t M) {
  const auto m = static_cast<Frequency>(M);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

}  // namespace detail

/// Samples P at the M points m/M. Any power-of-two M is accepted: when M is
/// too small to carry the spectrum the evaluation runs on a finer FFT grid and
/// is decimated, so the values are exact samples, never aliased ones.
inline GridSignal sample(const TrigPoly& p, std::size_t M) {
  require(M >= 2 && is_power_of_two(M), "sample: grid size must be a power of two >= 2");
  const std::size_t fft_size = std::max(M, next_power_of_two(static_cast<std::size_t>(2 * p.degree() + 2)));
  std::vector<Complex> buf(fft_size);
  for (const auto& t : p.terms()) buf[detail::frequency_bin(t.k, fft_size)] += t.c;
  detail::fft_inplace(buf, detail::FftDirection::Backward);
  if (fft_size == M) return GridSignal(std::move(buf));
  const std::size_t stride = fft_size / M;
  std::vector<Complex> out(M);
  for (std::size_t m = 0; m < M; ++m) out[m] = buf[m * stride];
  return GridSignal(std::move(out));
}

/// Sampling on the default grid for the polynomial's degree.
inline GridSignal sample(const TrigPoly& p) { return sample(p, grid_size_for_degree(p.degree())); }

/// Discrete Fourier coefficients of the samples, frequencies in [-M/2, M/2).
inline TrigPoly coefficients(const GridSignal& f) {
  const std::size_t M = f.size();
  std::vector<Complex> buf(f.samples().begin(), f.samples().end());
  detail::fft_inplace(buf, detail::FftDirection::Forward);
  std::vector<Term> terms;
  terms.reserve(M);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) terms.push_back({detail::bin_frequency(i, M), buf[i] * inv});
  return TrigPoly::from_terms(std::move(terms));
}

namespace detail {
inline void check_band(const GridSignal& f, Frequency n, const char* op) {
  if (n < 0) throw precondition_error(std::string(op) + ": index must be nonnegative");
  if (static_cast<std::size_t>(n) >= f.size() / 2)
    throw aliasing_error(std::string(op) + ": index " + std::to_string(n) + " not below M/2 = " +
                         std::to_string(f.size() / 2));
}
}  // namespace detail

inline TrigPoly partial_sum(const GridSignal& f, Frequency n) {
  detail::check_band(f, n, "partial_sum");
  return partial_sum(coefficients(f), n);
}

inline TrigPoly fejer_mean(const GridSignal& f, Frequency n) {
  require(n >= 1, "fejer_mean: n must be positive");
  detail::check_band(f, n, "fejer_mean");
  return fejer_mean(coefficients(f), n);
}

/// Riemann-sum L^p norm (sum |f(t_m)|^p / M)^(1/p); max |f| for p = infinity.
inline double lp_norm(std::span<const Complex> samples, const NormExponent& p) {
  if (samples.empty()) return 0.0;
  if (p.is_infinite()) {
    double m = 0.0;
    for (const auto& v : samples) m = std::max(m, std::abs(v));
    return m;
  }
  const double q = p.value();
  double acc = 0.0;
  if (q == 1.0) {
    for (const auto& v : samples) acc += std::abs(v);
    return acc / static_cast<double>(samples.size());
  }
  if (q == 2.0) {
    for (const auto& v : samples) acc += std::norm(v);
    return std::sqrt(acc / static_cast<double>(samples.size()));
  }
  for (const auto& v : samples) acc += std::pow(std::abs(v), q);
  return std::pow(acc / static_cast<double>(samples.size()), 1.0 / q);
}

inline double lp_norm(const GridSignal& f, const NormExponent& p) { return lp_norm(f.samples(), p); }

/// L^p norm of a polynomial on its default grid (or on a grid of at least `M`).
inline double lp_norm(const TrigPoly& f, const NormExponent& p, std::size_t M = 0) {
  return lp_norm(sample(f, std::max(M, grid_size_for_degree(f.degree()))), p);
}

}  // namespace fdl
