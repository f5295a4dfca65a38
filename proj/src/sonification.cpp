#include "zebra/sonification.hpp"

#include <algorithm>
#include <cmath>

#include "zebra/error.hpp"
#include "zebra/simd.hpp"

namespace zebra {

std::string_view mode_name(GuidingMode mode) {
  switch (mode) {
    case GuidingMode::speech: return "speech";
    case GuidingMode::mono: return "mono";
    case GuidingMode::stereo: return "stereo";
  }
  return "unknown";
}

std::optional<GuidingMode> parse_mode(std::string_view name) {
  if (name == "speech") return GuidingMode::speech;
  if (name == "mono") return GuidingMode::mono;
  if (name == "stereo") return GuidingMode::stereo;
  return std::nullopt;
}

SonificationConfig sonification_config_for(const GuidanceConfig& guidance) {
  SonificationConfig cfg;
  cfg.align_angle_threshold = guidance.align_angle_threshold;
  cfg.pitch_threshold = guidance.pitch_threshold;
  return cfg;
}

StimulusSpec beep_stimulus(double fundamental) {
  return {fundamental, 5, Harmonicity::harmonic, -6.0, 0.08, 0.06, -14.0};
}

StimulusSpec metal_stimulus(double fundamental) {
  return {fundamental, 12, Harmonicity::inharmonic, -3.0, 0.12, 0.06, -14.0};
}

StimulusSpec wood_stimulus(double fundamental) {
  return {fundamental, 8, Harmonicity::inharmonic, -6.0, 0.12, 0.06, -14.0};
}

StimulusSpec not_found_stimulus(double fundamental) {
  return {fundamental, 10, Harmonicity::inharmonic, -6.0, 0.3, 0.25, -14.0};
}

StimulusSpec pure_tone_stimulus(double fundamental) {
  return {fundamental, 5, Harmonicity::pure, -6.0, 0.08, 0.06, -14.0};
}

namespace {

// Linear interpolation from `at_low` (x <= low) to `at_high` (x >= high).
double ramp(double x, double low, double high, double at_low, double at_high) {
  const double t = std::clamp((x - low) / (high - low), 0.0, 1.0);
  return at_low + (at_high - at_low) * t;
}

std::vector<PatternNote> repeated(double fundamental, double duration, int count, double spacing) {
  std::vector<PatternNote> notes;
  for (int i = 0; i < count; ++i) notes.push_back({i * spacing, fundamental, duration});
  return notes;
}

SonificationProgram pitch_program(const GuidanceDecision& d, const SonificationConfig& cfg) {
  const double f0 = d.instruction == Instruction::Raise ? 800.0 : 200.0;
  SonificationProgram p;
  p.instruction = d.instruction;
  p.stimulus = beep_stimulus(f0);
  // Two back-to-back beeps.
  p.pattern = repeated(f0, p.stimulus.duration, 2, p.stimulus.duration);
  p.repetition_period = 1.0 / pitch_rate_hz(d.quantity, cfg);
  return p;
}

SonificationProgram not_found_program(const SonificationConfig& cfg) {
  SonificationProgram p;
  p.instruction = Instruction::NotFound;
  p.stimulus = not_found_stimulus(200.0);
  p.pattern = {{0.0, 200.0, 0.3}, {0.3, 200.0, 0.5}};
  p.repetition_period = cfg.not_found_period;
  return p;
}

SonificationProgram ahead_program(const GuidanceDecision& d, const SonificationConfig& cfg) {
  SonificationProgram p;
  p.instruction = Instruction::CrosswalkAhead;
  const auto scale = rising_scale(notes_for_distance(d.quantity), cfg);
  p.stimulus = pure_tone_stimulus(scale.front());
  for (std::size_t i = 0; i < scale.size(); ++i) {
    p.pattern.push_back({static_cast<double>(i) * cfg.scale_note_spacing, scale[i], p.stimulus.duration});
  }
  p.repetition_period = cfg.scale_period;
  return p;
}

double cross_gain_offset(double bias, const SonificationConfig& cfg) {
  return cfg.cross_max_boost_db * std::min(1.0, std::fabs(bias));
}

SonificationProgram cross_program(const GuidanceDecision& d, double factor, const SonificationConfig& cfg) {
  SonificationProgram p;
  p.instruction = Instruction::Cross;
  p.stimulus = wood_stimulus(500.0 * factor);
  p.stimulus.gain_db = cfg.cross_base_gain_db;
  const double fundamentals[] = {500.0, 800.0, 1000.0};
  for (int i = 0; i < 3; ++i) {
    p.pattern.push_back({i * cfg.cross_note_spacing, fundamentals[i] * factor, p.stimulus.duration});
  }
  p.repetition_period = cross_period(d.quantity, cfg);
  p.gain_offset_db = cross_gain_offset(d.lateral_bias, cfg);
  return p;
}

}  // namespace

double rotation_rate_hz(double angle, const SonificationConfig& cfg) {
  return ramp(std::fabs(angle), cfg.align_angle_threshold, cfg.rotation_saturation, cfg.rotation_rate_near,
              cfg.rotation_rate_far);
}

double pitch_rate_hz(double pitch, const SonificationConfig& cfg) {
  return ramp(std::fabs(pitch), cfg.pitch_threshold, cfg.pitch_saturation, cfg.pitch_rate_near,
              cfg.pitch_rate_far);
}

double step_period(double displacement, const SonificationConfig& cfg) {
  return ramp(displacement, cfg.step_near_distance, cfg.step_far_distance, cfg.step_period_near,
              cfg.step_period_far);
}

double cross_period(double distance_to_end, const SonificationConfig& cfg) {
  return ramp(distance_to_end, 0.0, cfg.cross_near_distance, cfg.cross_period_near, cfg.cross_period_far);
}

int notes_for_distance(double frontal) {
  if (frontal > 8.0) return 6;
  if (frontal > 6.0) return 5;
  if (frontal > 4.0) return 4;
  if (frontal > 2.0) return 3;
  return 2;
}

std::vector<double> rising_scale(int count, const SonificationConfig& cfg) {
  std::vector<double> freqs;
  if (count <= 1) {
    freqs.push_back(cfg.scale_low_hz);
    return freqs;
  }
  const double ratio = cfg.scale_high_hz / cfg.scale_low_hz;
  for (int i = 0; i < count; ++i) {
    freqs.push_back(cfg.scale_low_hz * std::pow(ratio, static_cast<double>(i) / (count - 1)));
  }
  return freqs;
}

SonificationProgram map_mono(const GuidanceDecision& d, const SonificationConfig& cfg) {
  switch (d.instruction) {
    case Instruction::Raise:
    case Instruction::Lower:
      return pitch_program(d, cfg);
    case Instruction::RotateLeft:
    case Instruction::RotateRight: {
      const double f0 = d.instruction == Instruction::RotateLeft ? 300.0 : 1200.0;
      SonificationProgram p;
      p.instruction = d.instruction;
      p.stimulus = metal_stimulus(f0);
      p.pattern = repeated(f0, p.stimulus.duration, 1, 0.0);
      p.repetition_period = 1.0 / rotation_rate_hz(d.quantity, cfg);
      return p;
    }
    case Instruction::StepLeft:
    case Instruction::StepRight: {
      const double f0 = d.instruction == Instruction::StepLeft ? 300.0 : 1200.0;
      SonificationProgram p;
      p.instruction = d.instruction;
      p.stimulus = wood_stimulus(f0);
      p.pattern = repeated(f0, p.stimulus.duration, 2, cfg.step_note_spacing);
      p.repetition_period = step_period(d.quantity, cfg);
      return p;
    }
    case Instruction::NotFound:
      return not_found_program(cfg);
    case Instruction::CrosswalkAhead:
      return ahead_program(d, cfg);
    case Instruction::Cross: {
      double factor = 1.0;
      if (d.lateral_bias < -cfg.cross_bias_deadband) factor = cfg.cross_left_factor;
      if (d.lateral_bias > cfg.cross_bias_deadband) factor = cfg.cross_right_factor;
      return cross_program(d, factor, cfg);
    }
  }
  return not_found_program(cfg);
}

SonificationProgram map_stereo(const GuidanceDecision& d, const SonificationConfig& cfg) {
  const double f0 = cfg.stereo_fundamental;
  switch (d.instruction) {
    case Instruction::RotateLeft:
    case Instruction::RotateRight: {
      SonificationProgram p;
      p.instruction = d.instruction;
      p.stimulus = metal_stimulus(f0);
      p.pattern = repeated(f0, p.stimulus.duration, 1, 0.0);
      p.repetition_period = cfg.stereo_rotate_period;
      const double signed_angle = d.instruction == Instruction::RotateLeft ? -d.quantity : d.quantity;
      p.pan = std::clamp(signed_angle / cfg.rotation_saturation, -1.0, 1.0);
      return p;
    }
    case Instruction::StepLeft:
    case Instruction::StepRight: {
      SonificationProgram p;
      p.instruction = d.instruction;
      p.stimulus = wood_stimulus(f0);
      p.pattern = repeated(f0, p.stimulus.duration, 2, cfg.step_note_spacing);
      p.repetition_period = step_period(d.quantity, cfg);
      p.pan = d.instruction == Instruction::StepLeft ? -1.0 : 1.0;
      return p;
    }
    case Instruction::Cross: {
      SonificationProgram p = cross_program(d, 1.0, cfg);
      p.pan = std::clamp(d.lateral_bias, -1.0, 1.0);
      return p;
    }
    default:
      return map_mono(d, cfg);
  }
}

std::optional<SonificationProgram> map_program(const GuidanceDecision& d, GuidingMode mode,
                                               const SonificationConfig& cfg) {
  switch (mode) {
    case GuidingMode::mono: return map_mono(d, cfg);
    case GuidingMode::stereo: return map_stereo(d, cfg);
    case GuidingMode::speech: break;
  }
  return std::nullopt;
}

void PanLaw::validate() const {
  if (!(max_ild_db > 0.0)) throw InvalidArgument("pan law: max_ild must be > 0");
  if (!(max_itd > 0.0)) throw InvalidArgument("pan law: max_itd must be > 0");
}

InterauralDifference interaural_difference(double azimuth_ratio, const PanLaw& law) {
  const double r = std::fabs(azimuth_ratio);
  return {r * law.max_ild_db, r * law.max_itd};
}

StereoBuffer pan_ild_itd(const std::vector<float>& mono, double azimuth_ratio, const PanLaw& law,
                         double sample_rate) {
  if (!(std::fabs(azimuth_ratio) <= 1.0)) throw InvalidArgument("pan: |azimuth_ratio| must be <= 1");
  const InterauralDifference diff = interaural_difference(azimuth_ratio, law);
  const auto delay = static_cast<std::size_t>(std::llround(diff.itd * sample_rate));
  const auto gain = static_cast<float>(std::pow(10.0, -diff.ild_db / 20.0));

  std::vector<float> near(mono.size() + delay, 0.0f);
  std::copy(mono.begin(), mono.end(), near.begin());
  std::vector<float> far(mono.size() + delay, 0.0f);
  simd::active_kernels().accumulate_scaled(std::span<float>(far).subspan(delay, mono.size()), mono, gain);

  if (azimuth_ratio >= 0.0) return {std::move(far), std::move(near)};
  return {std::move(near), std::move(far)};
}

}  // namespace zebra
