#include "zebra/psychoacoustics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "zebra/error.hpp"

namespace zebra {

std::optional<StaircaseDimension> parse_dimension(std::string_view name) {
  if (name == "ild") return StaircaseDimension::ild;
  if (name == "itd") return StaircaseDimension::itd;
  return std::nullopt;
}

void StaircaseConfig::validate() const {
  if (!(step > 0.0)) throw InvalidArgument("staircase: step must be > 0");
  if (start_level < floor) throw InvalidArgument("staircase: start level below floor");
  if (target_reversals < 1) throw InvalidArgument("staircase: target_reversals must be >= 1");
  if (threshold_reversals < 1 || discarded_reversals < 0) {
    throw InvalidArgument("staircase: bad reversal averaging parameters");
  }
}

StaircaseConfig default_staircase(StaircaseDimension dimension) {
  StaircaseConfig c;
  if (dimension == StaircaseDimension::itd) {
    c.start_level = 1.0;
    c.step = 0.05;
  }
  return c;
}

StaircaseState start_staircase(const StaircaseConfig& config) {
  config.validate();
  StaircaseState s;
  s.current_level = config.start_level;
  s.step = config.step;
  s.floor = config.floor;
  s.target_reversals = config.target_reversals;
  return s;
}

StaircaseState staircase_step(StaircaseState state, Response response) {
  if (state.finished()) throw StateError("staircase complete");
  const StaircaseDirection move =
      response == Response::correct ? StaircaseDirection::down : StaircaseDirection::up;
  if (state.direction && *state.direction != move) state.reversals.push_back(state.current_level);
  state.direction = move;
  ++state.trial_count;

  if (move == StaircaseDirection::down) {
    const double next = state.current_level - state.step;
    if (next < state.floor) {
      state.current_level = state.floor;
      ++state.clamp_count;
    } else {
      state.current_level = next;
    }
  } else {
    state.current_level += state.step;
  }
  return state;
}

double staircase_threshold(const StaircaseState& state, int k, int discard) {
  if (!state.finished()) throw StateError("staircase not finished");
  const auto& r = state.reversals;
  const auto first_usable = std::min<std::size_t>(static_cast<std::size_t>(std::max(discard, 0)), r.size());
  const auto usable = r.size() - first_usable;
  if (usable == 0) throw StateError("staircase: no reversals left after discarding");
  const auto count = std::min<std::size_t>(usable, static_cast<std::size_t>(std::max(k, 1)));
  const double sum = std::accumulate(r.end() - static_cast<std::ptrdiff_t>(count), r.end(), 0.0);
  return sum / static_cast<double>(count);
}

double psychometric_probability(double level, double threshold, double slope) {
  return 1.0 / (1.0 + std::exp(-slope * (level - threshold)));
}

Response simulated_listener(double level, double threshold, double slope, Rng& rng) {
  if (!(slope > 0.0)) throw InvalidArgument("simulated listener: slope must be > 0");
  return rng.uniform() < psychometric_probability(level, threshold, slope) ? Response::correct
                                                                          : Response::incorrect;
}

StaircaseRun run_simulated_staircase(const StaircaseConfig& config, double true_threshold, double slope,
                                     std::uint64_t seed) {
  Rng rng(seed);
  StaircaseRun run;
  StaircaseState state = start_staircase(config);
  while (!state.finished()) {
    const double level = state.current_level;
    const Response r = simulated_listener(level, true_threshold, slope, rng);
    const std::size_t reversals_before = state.reversals.size();
    state = staircase_step(std::move(state), r);
    run.trials.push_back({state.trial_count, level, r, state.reversals.size() > reversals_before});
  }
  run.estimate = staircase_threshold(state, config.threshold_reversals, config.discarded_reversals);
  run.final_state = std::move(state);
  return run;
}

std::string staircase_log_csv(const StaircaseRun& run) {
  std::string out = "trial,level,response,reversal_flag\n";
  for (const auto& t : run.trials) {
    out += fmt::format("{},{:.6f},{},{}\n", t.trial, t.level,
                       t.response == Response::correct ? "correct" : "incorrect", t.reversal ? 1 : 0);
  }
  return out;
}

}  // namespace zebra
