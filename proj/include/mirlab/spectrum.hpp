#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace mirlab {

namespace detail {
// FFTW planning touches global state; execution on distinct plans does not.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// One-sided power spectrum of a real series, bins k = 0..floor(N/2).
///
/// Scaled so that Parseval holds on the one-sided spectrum:
///   P_0 = |X_0|^2 / N, P_k = 2 |X_k|^2 / N for 0 < k < N/2,
///   P_{N/2} = |X_{N/2}|^2 / N when N is even,
/// hence sum_k P_k = sum_t x_t^2. For a centred series, the non-DC total
/// divided by N is the population variance.
inline std::vector<double> power_spectrum(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("power spectrum needs at least 2 samples");
  const std::size_t bins = n / 2 + 1;

  std::vector<double> in(x.begin(), x.end());
  auto out_deleter = [](fftw_complex* p) { fftw_free(p); };
  std::unique_ptr<fftw_complex, decltype(out_deleter)> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)), out_deleter);
  if (!out) throw std::bad_alloc();

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.get(), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<double> power(bins);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    power[k] = (unpaired ? 1.0 : 2.0) * (re * re + im * im) / nd;
  }
  return power;
}

}  // namespace mirlab
