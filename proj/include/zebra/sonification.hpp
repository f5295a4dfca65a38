#pragma once

// Parameter mapping from guidance decisions to repeating stimulus programs,
// for the mono and stereo guiding modes, plus the ILD/ITD panner.

#include <optional>
#include <string_view>
#include <vector>

#include "zebra/guidance.hpp"
#include "zebra/synthesis.hpp"

namespace zebra {

enum class GuidingMode { speech, mono, stereo };

std::string_view mode_name(GuidingMode mode);
std::optional<GuidingMode> parse_mode(std::string_view name);

struct PatternNote {
  double onset = 0.0;  // seconds from the start of the group
  double fundamental = 0.0;
  double duration = 0.0;

  friend bool operator==(const PatternNote&, const PatternNote&) = default;
};

// One group of notes, repeated every `repetition_period` seconds.
struct SonificationProgram {
  Instruction instruction = Instruction::NotFound;
  StimulusSpec stimulus;  // timbre; fundamental/duration come from each note
  std::optional<double> repetition_period;
  std::vector<PatternNote> pattern;  // onsets strictly increasing
  double pan = 0.0;                  // -1 full left .. +1 full right
  double gain_offset_db = 0.0;

  friend bool operator==(const SonificationProgram&, const SonificationProgram&) = default;
};

// Constants of the parameter mapping. Thresholds mirror GuidanceConfig so
// rates reach their fastest value where the instruction is released.
struct SonificationConfig {
  double align_angle_threshold = 0.17453292519943295;  // 10 deg
  double rotation_saturation = 1.5707963267948966;     // 90 deg: slowest rate at and beyond
  double rotation_rate_far = 1.6;                      // Hz
  double rotation_rate_near = 3.3;                     // Hz

  double pitch_threshold = 0.17453292519943295;  // 10 deg
  double pitch_saturation = 1.0471975511965976;  // 60 deg
  double pitch_rate_far = 1.0;
  double pitch_rate_near = 3.3;

  double step_far_distance = 2.0;
  double step_near_distance = 0.5;
  double step_period_far = 0.8;
  double step_period_near = 0.4;
  double step_note_spacing = 0.2;

  double scale_low_hz = 800.0;
  double scale_high_hz = 1700.0;
  double scale_note_spacing = 0.1;
  double scale_period = 1.0;

  double cross_near_distance = 4.0;
  double cross_period_far = 1.2;
  double cross_period_near = 0.7;
  double cross_note_spacing = 0.15;
  double cross_left_factor = 0.33;
  double cross_right_factor = 2.0;
  double cross_bias_deadband = 0.1;  // |bias| at or below keeps the unshifted fundamentals
  double cross_max_boost_db = 20.0;
  double cross_base_gain_db = -34.0;

  double stereo_fundamental = 500.0;
  double stereo_rotate_period = 0.4;

  double not_found_period = 1.5;
};

SonificationConfig sonification_config_for(const GuidanceConfig& guidance);

// Stimulus timbres per instruction family.
StimulusSpec beep_stimulus(double fundamental);        // raise/lower: harmonic
StimulusSpec metal_stimulus(double fundamental);       // rotate: inharmonic, bright
StimulusSpec wood_stimulus(double fundamental);        // step/cross: inharmonic, dull
StimulusSpec not_found_stimulus(double fundamental);   // slow inharmonic
StimulusSpec pure_tone_stimulus(double fundamental);   // rising scale

// Rate and period laws (linear between their endpoints, clamped outside).
double rotation_rate_hz(double angle, const SonificationConfig& cfg);
double pitch_rate_hz(double pitch, const SonificationConfig& cfg);
double step_period(double displacement, const SonificationConfig& cfg);
double cross_period(double distance_to_end, const SonificationConfig& cfg);

// Number of notes of the approach scale: >8 m -> 6, (6,8] -> 5, (4,6] -> 4,
// (2,4] -> 3, <= 2 -> 2.
int notes_for_distance(double frontal);

// `count` notes equally spaced in log frequency from low to high.
std::vector<double> rising_scale(int count, const SonificationConfig& cfg);

SonificationProgram map_mono(const GuidanceDecision& decision, const SonificationConfig& cfg = {});
SonificationProgram map_stereo(const GuidanceDecision& decision, const SonificationConfig& cfg = {});

// Dispatches on mode; speech mode has no program.
std::optional<SonificationProgram> map_program(const GuidanceDecision& decision, GuidingMode mode,
                                               const SonificationConfig& cfg = {});

struct PanLaw {
  double max_ild_db = 20.0;
  double max_itd = 0.001;  // seconds

  void validate() const;  // throws InvalidArgument
};

struct InterauralDifference {
  double ild_db = 0.0;
  double itd = 0.0;  // seconds
};

// Level and time offsets applied to the far ear for a given azimuth ratio.
InterauralDifference interaural_difference(double azimuth_ratio, const PanLaw& law);

struct StereoBuffer {
  std::vector<float> left;
  std::vector<float> right;
};

// The ear away from the source is attenuated by |ratio| * max_ild dB and
// delayed by round(|ratio| * max_itd * sample_rate) samples; the near ear is
// the unmodified input. Both channels have length mono.size() + delay.
// Throws InvalidArgument for |ratio| > 1.
StereoBuffer pan_ild_itd(const std::vector<float>& mono, double azimuth_ratio, const PanLaw& law,
                         double sample_rate);

}  // namespace zebra
