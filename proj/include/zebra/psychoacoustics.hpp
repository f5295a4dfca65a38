#pragma once

// Simple up-down adaptive staircase for interaural detection thresholds, and
// a logistic simulated listener to run it closed-loop.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zebra/random.hpp"

namespace zebra {

enum class Response { correct, incorrect };
enum class StaircaseDirection { up, down };

// ILD levels are in dB, ITD levels in milliseconds.
enum class StaircaseDimension { ild, itd };

std::optional<StaircaseDimension> parse_dimension(std::string_view name);

struct StaircaseConfig {
  double start_level = 20.0;
  double step = 1.0;
  double floor = 0.0;
  int target_reversals = 10;
  int threshold_reversals = 6;  // mean of the last k reversals
  int discarded_reversals = 2;  // never averaged

  void validate() const;
};

// Start at the top of the panner range and descend: 20 dB / 1 dB steps for
// ILD, 1 ms / 0.05 ms steps for ITD.
StaircaseConfig default_staircase(StaircaseDimension dimension);

struct StaircaseState {
  double current_level = 0.0;
  double step = 1.0;
  double floor = 0.0;
  std::optional<StaircaseDirection> direction;
  std::vector<double> reversals;
  int trial_count = 0;
  int target_reversals = 10;
  int clamp_count = 0;  // steps that hit the floor

  bool finished() const { return static_cast<int>(reversals.size()) >= target_reversals; }
};

StaircaseState start_staircase(const StaircaseConfig& config);

// correct -> one step down, incorrect -> one step up (never below the floor).
// A change of direction records the level of the turning trial as a
// reversal. Throws StateError once the target reversal count is reached.
StaircaseState staircase_step(StaircaseState state, Response response);

// Mean of the last `k` reversals, ignoring the first `discard`. Throws
// StateError for an unfinished staircase.
double staircase_threshold(const StaircaseState& state, int k = 6, int discard = 2);

// P(correct) = 1 / (1 + exp(-slope * (level - threshold))).
double psychometric_probability(double level, double threshold, double slope);

// Throws InvalidArgument for slope <= 0.
Response simulated_listener(double level, double threshold, double slope, Rng& rng);

struct StaircaseTrial {
  int trial = 0;
  double level = 0.0;
  Response response = Response::incorrect;
  bool reversal = false;
};

struct StaircaseRun {
  std::vector<StaircaseTrial> trials;
  StaircaseState final_state;
  double estimate = 0.0;
};

StaircaseRun run_simulated_staircase(const StaircaseConfig& config, double true_threshold, double slope,
                                     std::uint64_t seed);

// CSV with header "trial,level,response,reversal_flag".
std::string staircase_log_csv(const StaircaseRun& run);

}  // namespace zebra
