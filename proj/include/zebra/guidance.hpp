#pragma once

// Instruction logic: turns relative measures and device pitch into one of
// nine guidance instructions plus the quantity the sonifications encode.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "zebra/geometry.hpp"

namespace zebra {

enum class Instruction {
  RotateLeft,
  RotateRight,
  StepLeft,
  StepRight,
  NotFound,
  CrosswalkAhead,
  Cross,
  Raise,
  Lower,
};

inline constexpr std::array<Instruction, 9> kAllInstructions = {
    Instruction::RotateLeft, Instruction::RotateRight,    Instruction::StepLeft,
    Instruction::StepRight,  Instruction::NotFound,       Instruction::CrosswalkAhead,
    Instruction::Cross,      Instruction::Raise,          Instruction::Lower,
};

// Kebab-case names used on the command line, in logs and on the wire.
std::string_view instruction_name(Instruction i);
std::optional<Instruction> parse_instruction(std::string_view name);

bool is_rotation(Instruction i);
bool is_step(Instruction i);
bool is_pitch(Instruction i);

struct GuidanceDecision {
  Instruction instruction = Instruction::NotFound;
  // Radians for rotations and pitch, metres for steps and for the remaining
  // frontal distance (CrosswalkAhead: to the first stripe, Cross: to the far
  // edge), 0 for NotFound. Never negative.
  double quantity = 0.0;
  // Cross only: lateral correction in [-1, 1], negative = correct to the left.
  double lateral_bias = 0.0;

  friend bool operator==(const GuidanceDecision&, const GuidanceDecision&) = default;
};

// Each condition has an entry threshold and a looser release threshold; an
// instruction that is already active stays active until its release
// threshold is crossed.
struct GuidanceConfig {
  double align_angle_threshold = 0.17453292519943295;    // 10 deg: enter Rotate above
  double release_angle_threshold = 0.08726646259971647;  // 5 deg: leave Rotate below
  double lateral_margin = 0.15;                          // metres outside a border to enter Step
  double pitch_threshold = 0.17453292519943295;          // 10 deg: enter Raise/Lower above
  double pitch_release_threshold = 0.08726646259971647;  // 5 deg
  double ahead_max_distance = 10.0;                      // CrosswalkAhead quantity saturates here
  double cross_release_distance = 0.25;                  // Cross persists while min_frontal <= this

  void validate() const;  // throws InvalidArgument
};

// Priority: pitch, detection, rotation, lateral position, frontal distance.
GuidanceDecision next_instruction(const RelativeMeasures& measures, double pitch,
                                  const GuidanceConfig& config,
                                  std::optional<Instruction> previous);

enum class Locale { it, en };

std::string_view speech_text(Instruction instruction, Locale locale);

struct SpeechEvent {
  double time = 0.0;
  Instruction instruction = Instruction::NotFound;
  std::string text;

  friend bool operator==(const SpeechEvent&, const SpeechEvent&) = default;
};

// Spoken hint for the instruction currently being conveyed, in any guiding
// mode. In speech mode this repeats the last message played.
SpeechEvent tap_hint(const GuidanceDecision& current, Locale locale, double time = 0.0);

}  // namespace zebra
