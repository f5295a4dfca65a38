#pragma once

// Data-parallel inner loops used by the synthesizer and the mixer.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 variant. Variants perform the same IEEE operations in
// the same order per output element, so their results are bit-identical;
// tests/test_simd.cpp holds them to that.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace zebra::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

// Number of interleaved lanes used by the damped-phasor recurrence. The
// scalar reference walks the same lanes one at a time.
inline constexpr std::size_t kPhasorLanes = 4;

// State of kPhasorLanes complex phasors z_j = r^(n0+j) * exp(i*w*(n0+j)),
// plus the per-iteration multiplier r^L * exp(i*w*L).
struct PhasorLanes {
  double re[kPhasorLanes];
  double im[kPhasorLanes];
  double step_re;
  double step_im;
};

struct Kernels {
  Isa isa;

  // acc[k] += amplitude * min(1, (first_index + k) * inv_attack) * Im(z_k)
  // where z_k advances through the lane recurrence. `lanes` is updated in
  // place so consecutive calls continue the oscillation.
  void (*damped_phasor_accumulate)(std::span<double> acc, PhasorLanes& lanes,
                                   double amplitude, double inv_attack,
                                   std::size_t first_index);

  // max |src[k]|, 0 for an empty span.
  double (*peak_abs)(std::span<const double> src);

  // dst[k] = float(src[k] * gain)
  void (*scale_to_float)(std::span<const double> src, double gain,
                         std::span<float> dst);

  // dst[k] += gain * src[k]
  void (*accumulate_scaled)(std::span<float> dst, std::span<const float> src,
                            float gain);

  // Clamp to [-1, 1], scale by 32767 and round half away from zero into
  // interleaved L/R 16-bit frames. out.size() == 2 * left.size().
  void (*quantize_interleave_pcm16)(std::span<const float> left,
                                    std::span<const float> right,
                                    std::span<std::int16_t> out);
};

const Kernels& scalar_kernels();

// nullptr when the ISA is not compiled in or not supported by this CPU.
const Kernels* kernels_for(Isa isa);

// Kernels selected once per process: the best supported ISA, unless the
// ZEBRA_SIMD environment variable names another ("scalar" or "avx2").
const Kernels& active_kernels();

}  // namespace zebra::simd
