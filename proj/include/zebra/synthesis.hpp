#pragma once

// Additive synthesis of short impulsive stimuli: a handful of exponentially
// damped partials with a 1 ms linear attack and a spectral roll-off.

#include <vector>

namespace zebra {

enum class Harmonicity {
  harmonic,    // f_k = k * f0
  inharmonic,  // f_k = k * f0 * 1.02^(k-1), a stretched partial series
  pure,        // a single sinusoid at f0; partial_count is ignored
};

inline constexpr double kAttackTime = 0.001;
// Linear fade over the last samples of a stimulus so truncation never clicks.
inline constexpr double kReleaseTime = 0.005;

struct PartialSpec {
  double frequency = 0.0;   // Hz
  double amplitude = 0.0;   // linear, relative to the fundamental
  double decay_time = 0.0;  // seconds to fall to 1/e
  double attack_time = kAttackTime;
};

struct StimulusSpec {
  double fundamental = 440.0;
  int partial_count = 5;  // [5, 20]
  Harmonicity harmonicity = Harmonicity::harmonic;
  double rolloff_db_per_octave = -6.0;  // [-6, -3]
  double duration = 0.12;               // seconds
  double base_decay = 0.06;             // seconds, decay of the fundamental
  double gain_db = -14.0;               // peak level re full scale

  void validate() const;  // throws InvalidArgument
  friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

// Detuning factor (1 + delta_k) applied to partial k (1-based) in inharmonic mode.
double inharmonic_stretch(int k);

std::vector<PartialSpec> make_partials(const StimulusSpec& spec);

// As above, dropping partials at or above the Nyquist frequency.
std::vector<PartialSpec> make_partials(const StimulusSpec& spec, double sample_rate);

// Mono render of round(duration * sample_rate) samples, peak-normalized to
// spec.gain_db. Uses the active SIMD kernels; output is bit-identical across
// kernel variants. Throws InvalidArgument for sample_rate < 8000.
std::vector<float> render_stimulus(const StimulusSpec& spec, double sample_rate);

}  // namespace zebra
