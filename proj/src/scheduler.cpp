#include "zebra/scheduler.hpp"

#include <algorithm>

#include "zebra/error.hpp"

namespace zebra {

Scheduler::Scheduler(GuidingMode mode, SonificationConfig config, Locale locale)
    : mode_(mode), config_(config), locale_(locale) {}

std::vector<ScheduledEvent> Scheduler::advance(const GuidanceDecision& decision, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("scheduler: dt must be > 0");
  std::vector<ScheduledEvent> out;

  if (!last_instruction_ || *last_instruction_ != decision.instruction) {
    last_instruction_ = decision.instruction;
    remaining_phase_ = 0.0;
    if (mode_ == GuidingMode::speech) {
      out.emplace_back(SpeechEvent{time_, decision.instruction,
                                   std::string(speech_text(decision.instruction, locale_))});
    }
  }

  program_ = map_program(decision, mode_, config_);
  if (program_ && program_->repetition_period) {
    const double period = *program_->repetition_period;
    double elapsed = 0.0;
    while (true) {
      const double until_onset = std::max(0.0, remaining_phase_) * period;
      if (until_onset >= dt - elapsed) {
        remaining_phase_ -= (dt - elapsed) / period;
        break;
      }
      elapsed += until_onset;
      emit_group(time_ + elapsed, out);
      remaining_phase_ = 1.0;
    }
  }

  time_ += dt;
  return out;
}

void Scheduler::emit_group(double onset, std::vector<ScheduledEvent>& out) const {
  for (const PatternNote& note : program_->pattern) {
    AudioEvent e;
    e.time = onset + note.onset;
    e.instruction = program_->instruction;
    e.stimulus = program_->stimulus;
    e.stimulus.fundamental = note.fundamental;
    e.stimulus.duration = note.duration;
    e.pan = program_->pan;
    e.gain_offset_db = program_->gain_offset_db;
    out.emplace_back(std::move(e));
  }
}

}  // namespace zebra
