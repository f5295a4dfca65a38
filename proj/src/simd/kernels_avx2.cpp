#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kernels_common.hpp"
#include "zebra/simd.hpp"

#ifndef __AVX2__
#error kernels_avx2.cpp must be compiled with -mavx2
#endif

namespace zebra::simd {
namespace {

static_assert(kPhasorLanes == 4, "AVX2 phasor kernel holds one lane group per __m256d");

void damped_phasor_accumulate(std::span<double> acc, PhasorLanes& lanes,
                              double amplitude, double inv_attack,
                              std::size_t first_index) {
  const std::size_t n = acc.size();
  __m256d re = _mm256_loadu_pd(lanes.re);
  __m256d im = _mm256_loadu_pd(lanes.im);
  const __m256d step_re = _mm256_set1_pd(lanes.step_re);
  const __m256d step_im = _mm256_set1_pd(lanes.step_im);
  const __m256d amp = _mm256_set1_pd(amplitude);
  const __m256d inv_att = _mm256_set1_pd(inv_attack);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lane_offset = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);

  std::size_t k = 0;
  for (; k + kPhasorLanes <= n; k += kPhasorLanes) {
    const __m256d index = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(first_index + k)), lane_offset);
    const __m256d ramp = _mm256_min_pd(_mm256_mul_pd(index, inv_att), one);
    const __m256d gain = _mm256_mul_pd(amp, ramp);
    double* dst = acc.data() + k;
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), _mm256_mul_pd(gain, im)));

    const __m256d next_re = _mm256_sub_pd(_mm256_mul_pd(re, step_re), _mm256_mul_pd(im, step_im));
    const __m256d next_im = _mm256_add_pd(_mm256_mul_pd(re, step_im), _mm256_mul_pd(im, step_re));
    re = next_re;
    im = next_im;
  }
  _mm256_storeu_pd(lanes.re, re);
  _mm256_storeu_pd(lanes.im, im);
  if (k < n) {
    detail::phasor_tail(acc.data() + k, n - k, lanes, amplitude, inv_attack, first_index + k);
  }
  _mm256_zeroupper();
}

double peak_abs(std::span<const double> src) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d peak4 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= src.size(); k += 4) {
    peak4 = _mm256_max_pd(peak4, _mm256_andnot_pd(sign, _mm256_loadu_pd(src.data() + k)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, peak4);
  double peak = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; k < src.size(); ++k) peak = std::max(peak, std::fabs(src[k]));
  _mm256_zeroupper();
  return peak;
}

void scale_to_float(std::span<const double> src, double gain, std::span<float> dst) {
  const __m256d g = _mm256_set1_pd(gain);
  std::size_t k = 0;
  for (; k + 4 <= src.size(); k += 4) {
    _mm_storeu_ps(dst.data() + k, _mm256_cvtpd_ps(_mm256_mul_pd(_mm256_loadu_pd(src.data() + k), g)));
  }
  for (; k < src.size(); ++k) dst[k] = static_cast<float>(src[k] * gain);
  _mm256_zeroupper();
}

void accumulate_scaled(std::span<float> dst, std::span<const float> src, float gain) {
  const __m256 g = _mm256_set1_ps(gain);
  std::size_t k = 0;
  for (; k + 8 <= src.size(); k += 8) {
    float* d = dst.data() + k;
    _mm256_storeu_ps(d, _mm256_add_ps(_mm256_loadu_ps(d), _mm256_mul_ps(g, _mm256_loadu_ps(src.data() + k))));
  }
  for (; k < src.size(); ++k) dst[k] += gain * src[k];
  _mm256_zeroupper();
}

inline __m128i quantize4(const float* src) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d v = _mm256_mul_pd(
      _mm256_max_pd(_mm256_min_pd(_mm256_cvtps_pd(_mm_loadu_ps(src)), _mm256_set1_pd(1.0)),
                    _mm256_set1_pd(-1.0)),
      _mm256_set1_pd(32767.0));
  const __m256d magnitude = _mm256_floor_pd(_mm256_add_pd(_mm256_andnot_pd(sign, v), _mm256_set1_pd(0.5)));
  return _mm256_cvttpd_epi32(_mm256_or_pd(magnitude, _mm256_and_pd(sign, v)));
}

void quantize_interleave_pcm16(std::span<const float> left, std::span<const float> right,
                               std::span<std::int16_t> out) {
  std::size_t k = 0;
  for (; k + 4 <= left.size(); k += 4) {
    const __m128i l = quantize4(left.data() + k);
    const __m128i r = quantize4(right.data() + k);
    const __m128i packed = _mm_packs_epi32(_mm_unpacklo_epi32(l, r), _mm_unpackhi_epi32(l, r));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out.data() + 2 * k), packed);
  }
  for (; k < left.size(); ++k) {
    out[2 * k] = detail::quantize_sample(left[k]);
    out[2 * k + 1] = detail::quantize_sample(right[k]);
  }
  _mm256_zeroupper();
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{
      Isa::avx2,          &damped_phasor_accumulate, &peak_abs,
      &scale_to_float,    &accumulate_scaled,        &quantize_interleave_pcm16,
  };
  return k;
}

}  // namespace zebra::simd

#endif
