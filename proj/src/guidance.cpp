#include "zebra/guidance.hpp"

#include <algorithm>
#include <cmath>

#include "zebra/error.hpp"

namespace zebra {

namespace {

struct InstructionText {
  Instruction instruction;
  std::string_view name;
  std::string_view italian;
  std::string_view english;
};

constexpr std::array<InstructionText, 9> kTexts = {{
    {Instruction::RotateLeft, "rotate-left", "Ruota a sinistra", "Rotate left"},
    {Instruction::RotateRight, "rotate-right", "Ruota a destra", "Rotate right"},
    {Instruction::StepLeft, "step-left", "Passo a sinistra", "Step left"},
    {Instruction::StepRight, "step-right", "Passo a destra", "Step right"},
    {Instruction::NotFound, "not-found", "Non trovato", "Crosswalk not found"},
    {Instruction::CrosswalkAhead, "crosswalk-ahead", "Strisce davanti", "Crosswalk ahead"},
    {Instruction::Cross, "cross", "Attraversa", "Cross"},
    {Instruction::Raise, "raise", "Alza il dispositivo", "Rise the phone"},
    {Instruction::Lower, "lower", "Abbassa il dispositivo", "Lower the phone"},
}};

const InstructionText& text_for(Instruction i) {
  return kTexts[static_cast<std::size_t>(i)];
}

}  // namespace

std::string_view instruction_name(Instruction i) { return text_for(i).name; }

std::optional<Instruction> parse_instruction(std::string_view name) {
  for (const auto& t : kTexts) {
    if (t.name == name) return t.instruction;
  }
  return std::nullopt;
}

bool is_rotation(Instruction i) { return i == Instruction::RotateLeft || i == Instruction::RotateRight; }
bool is_step(Instruction i) { return i == Instruction::StepLeft || i == Instruction::StepRight; }
bool is_pitch(Instruction i) { return i == Instruction::Raise || i == Instruction::Lower; }

void GuidanceConfig::validate() const {
  if (!(release_angle_threshold > 0.0) || !(align_angle_threshold > release_angle_threshold)) {
    throw InvalidArgument("guidance config: need 0 < release_angle_threshold < align_angle_threshold");
  }
  if (!(pitch_release_threshold > 0.0) || !(pitch_threshold > pitch_release_threshold)) {
    throw InvalidArgument("guidance config: need 0 < pitch_release_threshold < pitch_threshold");
  }
  if (!(lateral_margin > 0.0)) throw InvalidArgument("guidance config: lateral_margin must be > 0");
  if (!(ahead_max_distance > 0.0)) throw InvalidArgument("guidance config: ahead_max_distance must be > 0");
  if (!(cross_release_distance >= 0.0)) {
    throw InvalidArgument("guidance config: cross_release_distance must be >= 0");
  }
}

GuidanceDecision next_instruction(const RelativeMeasures& m, double pitch, const GuidanceConfig& config,
                                  std::optional<Instruction> previous) {
  auto was = [&](auto predicate) { return previous && predicate(*previous); };
  auto was_exactly = [&](Instruction i) { return previous && *previous == i; };

  const double pitch_gate = was(is_pitch) ? config.pitch_release_threshold : config.pitch_threshold;
  if (std::fabs(pitch) > pitch_gate) {
    return {pitch > 0.0 ? Instruction::Raise : Instruction::Lower, std::fabs(pitch), 0.0};
  }

  if (!m.valid) return {Instruction::NotFound, 0.0, 0.0};

  const double angle_gate = was(is_rotation) ? config.release_angle_threshold : config.align_angle_threshold;
  if (std::fabs(m.horizontal_rotation) > angle_gate) {
    return {m.horizontal_rotation > 0.0 ? Instruction::RotateRight : Instruction::RotateLeft,
            std::fabs(m.horizontal_rotation), 0.0};
  }

  // Outside the right border: step left until back inside by the margin.
  const double margin = config.lateral_margin;
  if (m.lateral_right < -margin || (was_exactly(Instruction::StepLeft) && m.lateral_right < margin)) {
    return {Instruction::StepLeft, margin - m.lateral_right, 0.0};
  }
  if (m.lateral_left < -margin || (was_exactly(Instruction::StepRight) && m.lateral_left < margin)) {
    return {Instruction::StepRight, margin - m.lateral_left, 0.0};
  }

  const bool keep_crossing = was_exactly(Instruction::Cross) && m.min_frontal <= config.cross_release_distance;
  if (!keep_crossing && m.min_frontal > 0.0) {
    return {Instruction::CrosswalkAhead, std::min(m.min_frontal, config.ahead_max_distance), 0.0};
  }

  const double width = m.lateral_left + m.lateral_right;
  double bias = 0.0;
  if (width > 0.0) {
    bias = std::clamp((m.lateral_right - m.lateral_left) / width, -1.0, 1.0);
  } else if (m.lateral_right != m.lateral_left) {
    bias = m.lateral_right > m.lateral_left ? 1.0 : -1.0;
  }
  return {Instruction::Cross, std::max(0.0, m.max_frontal), bias};
}

std::string_view speech_text(Instruction instruction, Locale locale) {
  const auto& t = text_for(instruction);
  return locale == Locale::it ? t.italian : t.english;
}

SpeechEvent tap_hint(const GuidanceDecision& current, Locale locale, double time) {
  return {time, current.instruction, std::string(speech_text(current.instruction, locale))};
}

}  // namespace zebra
