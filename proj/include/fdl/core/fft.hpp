#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>

#include <fftw3.h>

namespace fdl::detail {

// The FFTW planner is not reentrant; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

enum class FftDirection { Forward, Backward };

/// In-place unnormalized DFT.
/// Forward:  X_k = sum_m x_m exp(-2 pi i k m / M)
/// Backward: x_m = sum_k X_k exp(+2 pi i k m / M)
inline void fft_inplace(std::span<std::complex<double>> data, FftDirection dir) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace fdl::detail
