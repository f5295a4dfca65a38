#include "zebra/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "zebra/error.hpp"

namespace zebra {

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

Spectrum magnitude_spectrum(std::span<const float> buffer, double sample_rate, std::size_t min_fft_size) {
  const std::size_t n = std::bit_ceil(std::max<std::size_t>({min_fft_size, buffer.size(), 2}));
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }

  std::fill(in.get(), in.get() + n, 0.0);
  const std::size_t len = buffer.size();
  for (std::size_t i = 0; i < len; ++i) {
    const double w = len > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len - 1)) : 1.0;
    in.get()[i] = w * buffer[i];
  }
  fftw_execute(plan);

  Spectrum s;
  s.bin_hz = sample_rate / static_cast<double>(n);
  s.magnitude.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    s.magnitude[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return s;
}

SpectralPeak strongest_peak(const Spectrum& spectrum, double low_hz, double high_hz) {
  const auto& mag = spectrum.magnitude;
  if (mag.size() < 3) return {};
  auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil(low_hz / spectrum.bin_hz)));
  auto hi = static_cast<std::size_t>(std::floor(high_hz / spectrum.bin_hz));
  hi = std::min(hi, mag.size() - 2);
  if (lo > hi) return {};

  std::size_t best = lo;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (mag[k] > mag[best]) best = k;
  }
  const double a = std::log(std::max(mag[best - 1], 1e-300));
  const double b = std::log(std::max(mag[best], 1e-300));
  const double c = std::log(std::max(mag[best + 1], 1e-300));
  const double denom = a - 2.0 * b + c;
  const double offset = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return {(static_cast<double>(best) + offset) * spectrum.bin_hz,
          std::exp(b - 0.25 * (a - c) * offset)};
}

double estimate_fundamental(std::span<const float> buffer, double sample_rate, double min_hz, double max_hz) {
  if (buffer.size() < 2048) throw InvalidArgument("estimate_fundamental: need at least 2048 samples");
  const bool silent = std::all_of(buffer.begin(), buffer.end(), [](float v) { return v == 0.0f; });
  if (silent) throw Error("estimate_fundamental: no signal");
  const Spectrum s = magnitude_spectrum(buffer, sample_rate);
  return strongest_peak(s, min_hz, std::min(max_hz, 0.5 * sample_rate)).frequency;
}

}  // namespace zebra
