#include <cmath>

#include "kernels_common.hpp"
#include "zebra/simd.hpp"

namespace zebra::simd {
namespace {

void damped_phasor_accumulate(std::span<double> acc, PhasorLanes& lanes,
                              double amplitude, double inv_attack,
                              std::size_t first_index) {
  const std::size_t n = acc.size();
  std::size_t k = 0;
  for (; k + kPhasorLanes <= n; k += kPhasorLanes) {
    const double base = static_cast<double>(first_index + k);
    for (std::size_t j = 0; j < kPhasorLanes; ++j) {
      const double gain = amplitude * detail::attack_ramp(base + static_cast<double>(j), inv_attack);
      acc[k + j] += gain * lanes.im[j];
    }
    detail::advance_lanes(lanes);
  }
  if (k < n) {
    detail::phasor_tail(acc.data() + k, n - k, lanes, amplitude, inv_attack, first_index + k);
  }
}

double peak_abs(std::span<const double> src) {
  double peak = 0.0;
  for (double v : src) peak = std::max(peak, std::fabs(v));
  return peak;
}

void scale_to_float(std::span<const double> src, double gain, std::span<float> dst) {
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = static_cast<float>(src[k] * gain);
}

void accumulate_scaled(std::span<float> dst, std::span<const float> src, float gain) {
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] += gain * src[k];
}

void quantize_interleave_pcm16(std::span<const float> left, std::span<const float> right,
                               std::span<std::int16_t> out) {
  for (std::size_t k = 0; k < left.size(); ++k) {
    out[2 * k] = detail::quantize_sample(left[k]);
    out[2 * k + 1] = detail::quantize_sample(right[k]);
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{
      Isa::scalar,        &damped_phasor_accumulate, &peak_abs,
      &scale_to_float,    &accumulate_scaled,        &quantize_interleave_pcm16,
  };
  return k;
}

}  // namespace zebra::simd
