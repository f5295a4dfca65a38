#include "zebra/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zebra/error.hpp"
#include "zebra/simd.hpp"

namespace zebra {

namespace {

// The recurrence is re-anchored from closed form at this interval so rounding
// drift cannot accumulate over long stimuli.
constexpr std::size_t kSegment = 1024;

simd::PhasorLanes anchor_lanes(double omega, double decay_per_sample, std::size_t first) {
  simd::PhasorLanes lanes{};
  for (std::size_t j = 0; j < simd::kPhasorLanes; ++j) {
    const double n = static_cast<double>(first + j);
    const double magnitude = std::exp(-n * decay_per_sample);
    lanes.re[j] = magnitude * std::cos(omega * n);
    lanes.im[j] = magnitude * std::sin(omega * n);
  }
  const double stride = static_cast<double>(simd::kPhasorLanes);
  const double step_magnitude = std::exp(-stride * decay_per_sample);
  lanes.step_re = step_magnitude * std::cos(omega * stride);
  lanes.step_im = step_magnitude * std::sin(omega * stride);
  return lanes;
}

}  // namespace

void StimulusSpec::validate() const {
  if (!(fundamental > 0.0)) throw InvalidArgument("stimulus: fundamental must be > 0");
  if (harmonicity != Harmonicity::pure && (partial_count < 5 || partial_count > 20)) {
    throw InvalidArgument("stimulus: partial_count must be in [5, 20]");
  }
  if (rolloff_db_per_octave < -6.0 || rolloff_db_per_octave > -3.0) {
    throw InvalidArgument("stimulus: roll-off must be in [-6, -3] dB/octave");
  }
  if (!(duration >= 0.0)) throw InvalidArgument("stimulus: duration must be >= 0");
  if (!(base_decay > 0.0)) throw InvalidArgument("stimulus: base_decay must be > 0");
}

double inharmonic_stretch(int k) { return std::pow(1.02, k - 1); }

std::vector<PartialSpec> make_partials(const StimulusSpec& spec) {
  spec.validate();
  const int count = spec.harmonicity == Harmonicity::pure ? 1 : spec.partial_count;
  std::vector<PartialSpec> partials;
  partials.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    double ratio = k;
    if (spec.harmonicity == Harmonicity::inharmonic) ratio *= inharmonic_stretch(k);
    PartialSpec p;
    p.frequency = spec.fundamental * ratio;
    p.amplitude = std::pow(10.0, spec.rolloff_db_per_octave * std::log2(ratio) / 20.0);
    p.decay_time = spec.base_decay / std::sqrt(static_cast<double>(k));
    p.attack_time = kAttackTime;
    partials.push_back(p);
  }
  return partials;
}

std::vector<PartialSpec> make_partials(const StimulusSpec& spec, double sample_rate) {
  auto partials = make_partials(spec);
  std::erase_if(partials, [&](const PartialSpec& p) { return p.frequency >= 0.5 * sample_rate; });
  return partials;
}

std::vector<float> render_stimulus(const StimulusSpec& spec, double sample_rate) {
  if (!(sample_rate >= 8000.0)) throw InvalidArgument("render: sample_rate must be >= 8000 Hz");
  const auto partials = make_partials(spec, sample_rate);
  const auto length = static_cast<std::size_t>(std::llround(spec.duration * sample_rate));
  std::vector<float> out(length, 0.0f);
  if (length == 0) return out;

  const simd::Kernels& kernels = simd::active_kernels();
  std::vector<double> acc(length, 0.0);
  for (const PartialSpec& p : partials) {
    const double omega = 2.0 * std::numbers::pi * p.frequency / sample_rate;
    const double decay_per_sample = 1.0 / (p.decay_time * sample_rate);
    const double inv_attack = 1.0 / (p.attack_time * sample_rate);
    for (std::size_t first = 0; first < length; first += kSegment) {
      const std::size_t count = std::min(kSegment, length - first);
      simd::PhasorLanes lanes = anchor_lanes(omega, decay_per_sample, first);
      kernels.damped_phasor_accumulate(std::span<double>(acc).subspan(first, count), lanes, p.amplitude,
                                       inv_attack, first);
    }
  }

  const auto release = std::min<std::size_t>(length, static_cast<std::size_t>(std::llround(kReleaseTime * sample_rate)));
  for (std::size_t i = 0; i < release; ++i) {
    acc[length - 1 - i] *= static_cast<double>(i) / static_cast<double>(release);
  }

  const double peak = kernels.peak_abs(acc);
  if (peak > 0.0) {
    kernels.scale_to_float(acc, std::pow(10.0, spec.gain_db / 20.0) / peak, out);
  }
  return out;
}

}  // namespace zebra
