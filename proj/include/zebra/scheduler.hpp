#pragma once

// Control-rate scheduler: re-maps the latest decision on every tick and emits
// timed stimulus onsets (mono/stereo) or speech messages (speech mode).

#include <optional>
#include <variant>
#include <vector>

#include "zebra/guidance.hpp"
#include "zebra/sonification.hpp"

namespace zebra {

struct AudioEvent {
  double time = 0.0;  // seconds since session start
  Instruction instruction = Instruction::NotFound;
  StimulusSpec stimulus;  // fundamental and duration already set for this note
  double pan = 0.0;
  double gain_offset_db = 0.0;

  friend bool operator==(const AudioEvent&, const AudioEvent&) = default;
};

using ScheduledEvent = std::variant<AudioEvent, SpeechEvent>;

class Scheduler {
 public:
  Scheduler(GuidingMode mode, SonificationConfig config = {}, Locale locale = Locale::it);

  // Advances the clock by dt (> 0) under `decision`. A change of instruction
  // restarts the repetition cycle immediately and, in speech mode, produces
  // exactly one SpeechEvent. Repetition progress is kept as a phase, so a
  // changing period takes effect continuously.
  std::vector<ScheduledEvent> advance(const GuidanceDecision& decision, double dt);

  double time() const { return time_; }
  GuidingMode mode() const { return mode_; }
  const std::optional<SonificationProgram>& program() const { return program_; }

 private:
  void emit_group(double onset, std::vector<ScheduledEvent>& out) const;

  GuidingMode mode_;
  SonificationConfig config_;
  Locale locale_;
  double time_ = 0.0;
  std::optional<Instruction> last_instruction_;
  std::optional<SonificationProgram> program_;
  double remaining_phase_ = 0.0;  // fraction of the period until the next group
};

}  // namespace zebra
