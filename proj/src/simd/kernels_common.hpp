#pragma once

// Per-element reference operations shared by every kernel variant. Both the
// scalar and the vector translation units use these for their tails, so the
// tails compute exactly what the scalar reference computes.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "zebra/simd.hpp"

namespace zebra::simd::detail {
namespace {

inline double attack_ramp(double index, double inv_attack) {
  return std::min(1.0, index * inv_attack);
}

inline void advance_lanes(PhasorLanes& lanes) {
  for (std::size_t j = 0; j < kPhasorLanes; ++j) {
    const double re = lanes.re[j];
    const double im = lanes.im[j];
    lanes.re[j] = re * lanes.step_re - im * lanes.step_im;
    lanes.im[j] = re * lanes.step_im + im * lanes.step_re;
  }
}

// Accumulates the trailing partial group (count < kPhasorLanes) and advances.
inline void phasor_tail(double* acc, std::size_t count, PhasorLanes& lanes,
                        double amplitude, double inv_attack, std::size_t index) {
  for (std::size_t j = 0; j < count; ++j) {
    const double gain = amplitude * attack_ramp(static_cast<double>(index) + static_cast<double>(j), inv_attack);
    acc[j] += gain * lanes.im[j];
  }
  advance_lanes(lanes);
}

inline std::int16_t quantize_sample(float x) {
  const double v = std::clamp(static_cast<double>(x), -1.0, 1.0) * 32767.0;
  const double r = std::floor(std::fabs(v) + 0.5);
  return static_cast<std::int16_t>(v < 0.0 ? -r : r);
}

}  // namespace
}  // namespace zebra::simd::detail
