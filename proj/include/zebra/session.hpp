#pragma once

// Closed-loop crossing sessions: the simulated world, the instruction logic
// with gyro fusion, the sonification scheduler and an agent (scripted policy
// or a human over the bridge), plus the metrics recorded per session.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zebra/geometry.hpp"
#include "zebra/guidance.hpp"
#include "zebra/scheduler.hpp"
#include "zebra/simulator.hpp"
#include "zebra/sonification.hpp"

namespace zebra {

inline constexpr double kControlRate = 30.0;  // Hz

enum class AgentPolicy { instruction_follower, proportional_follower, replay };

std::string_view policy_name(AgentPolicy policy);
std::optional<AgentPolicy> parse_policy(std::string_view name);

// A control change applied from `tick` on; replay logs store only changes.
struct ControlChange {
  std::int64_t tick = 0;
  Control control;

  friend bool operator==(const ControlChange&, const ControlChange&) = default;
};

struct Scenario {
  std::string name = "scenario";
  CrossingLayout layout;
  Pose start_pose;
  GuidingMode mode = GuidingMode::mono;
  std::uint64_t seed = 1;
  RecognizerModel noise;
  AgentPolicy policy = AgentPolicy::instruction_follower;
  double timeout_s = 120.0;
  Locale locale = Locale::it;
  std::vector<ControlChange> controls;  // replay policy only
  std::vector<std::int64_t> taps;       // ticks at which the screen is tapped

  void validate() const;
};

struct EventRecord {
  double time = 0.0;
  std::string kind;
  std::string payload;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct SessionMetrics {
  std::string scenario;
  GuidingMode mode = GuidingMode::mono;
  std::uint64_t seed = 0;
  bool completed = false;
  bool aborted = false;
  std::optional<double> time_to_align;  // start to first contact with the crossing
  std::optional<double> time_to_cross;  // first contact to exit past the far edge
  int message_count = 0;                // instruction transitions
  int tap_count = 0;
  double duration = 0.0;
  std::vector<EventRecord> event_log;
};

// Logic-module state: holds the last recognition, fills in the rotation from
// the gyroscope between recognitions, and reports the crossing as lost after
// `lost_after` consecutive failed recognitions.
class MeasureTracker {
 public:
  explicit MeasureTracker(int lost_after = 3) : lost_after_(lost_after) {}

  void on_recognition(const RelativeMeasures& measures, double gyro_heading, double time);
  RelativeMeasures current(double gyro_heading) const;
  const FusionState& fusion() const { return fusion_; }

 private:
  int lost_after_;
  FusionState fusion_;
  RelativeMeasures last_;
  int missed_ = 0;
};

struct TickResult {
  GuidanceDecision decision;
  bool instruction_changed = false;
  std::vector<AudioEvent> audio;
  std::vector<SpeechEvent> speech;
  bool finished = false;
};

struct SessionOptions {
  GuidanceConfig guidance;
  SonificationConfig sonification;  // thresholds are synced from `guidance`
  double ideal_capture_angle = kDefaultIdealCaptureAngle;
  int lost_after = 3;
};

class Session {
 public:
  explicit Session(const Scenario& scenario, SessionOptions options = {});

  using Agent = std::function<Control(const GuidanceDecision&)>;

  // One control period: recognition (at the recognizer rate), logic,
  // guidance and scheduling; then `agent` sees the new decision and its
  // control moves the world. Throws StateError once finished.
  TickResult tick(const Agent& agent, bool tap);
  TickResult tick(const Control& control, bool tap);

  // Marks the session as aborted (e.g. client disconnected).
  void abort(const std::string& reason);

  bool finished() const { return finished_; }
  std::int64_t tick_index() const { return tick_; }
  double dt() const { return 1.0 / kControlRate; }
  const World& world() const { return world_; }
  const GuidanceDecision& decision() const { return decision_; }
  const RelativeMeasures& measures() const { return measures_; }
  const Scenario& scenario() const { return scenario_; }
  const SessionMetrics& metrics() const { return metrics_; }
  const std::vector<ControlChange>& control_log() const { return control_log_; }
  const std::vector<std::int64_t>& tap_log() const { return tap_log_; }
  const std::vector<AudioEvent>& audio_events() const { return audio_events_; }
  // Heading as integrated by the simulated gyroscope.
  double gyro_heading() const { return gyro_heading_; }

 private:
  void log(double time, std::string kind, std::string payload);
  void finish(bool completed, const char* kind);

  Scenario scenario_;
  SessionOptions options_;
  World world_;
  Rng recognition_rng_;
  Rng gyro_rng_;
  MeasureTracker tracker_;
  Scheduler scheduler_;
  std::int64_t tick_ = 0;
  std::int64_t recognition_interval_ = 3;
  double gyro_heading_ = 0.0;
  RelativeMeasures measures_;
  GuidanceDecision decision_;
  std::optional<Instruction> previous_;
  bool finished_ = false;
  bool aligned_ = false;
  SessionMetrics metrics_;
  std::vector<ControlChange> control_log_;
  std::vector<std::int64_t> tap_log_;
  std::vector<AudioEvent> audio_events_;
};

// Control chosen by a scripted policy from the current decision.
Control policy_control(AgentPolicy policy, const GuidanceDecision& decision);

// Replay lookup: the last change at or before `tick`.
Control replay_control(const std::vector<ControlChange>& log, std::int64_t tick);

struct SessionResult {
  SessionMetrics metrics;
  std::vector<AudioEvent> audio_events;
  std::vector<ControlChange> control_log;
};

// Runs a scenario to completion or timeout under its policy.
SessionResult run_scripted(const Scenario& scenario, SessionOptions options = {});
SessionResult run_scripted(const Scenario& scenario, GuidingMode mode, AgentPolicy policy,
                           SessionOptions options = {});

// Frames needed to hold the session audio including the tail of the last
// stimulus, rounded up to whole blocks.
std::size_t session_audio_frames(const SessionResult& result, int sample_rate, std::size_t block_frames);

std::string event_log_csv(const std::vector<EventRecord>& log);

// Header plus one row per session.
std::string metrics_csv(const std::vector<SessionMetrics>& runs);

struct ModeSummary {
  GuidingMode mode = GuidingMode::mono;
  int runs = 0;
  int completed = 0;
  double align_mean = 0.0, align_sd = 0.0;
  double cross_mean = 0.0, cross_sd = 0.0;
  double messages_mean = 0.0, messages_sd = 0.0;
  double taps_mean = 0.0, taps_sd = 0.0;
};

// Per-mode mean and sample standard deviation. Times average over sessions
// that recorded them. Throws InvalidArgument for an empty list.
std::vector<ModeSummary> metrics_summary(const std::vector<SessionMetrics>& runs);
std::string summary_csv(const std::vector<ModeSummary>& summary);

// Scenario files (JSON).
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& scenario);

// The crossing used in evaluation: five 2.5 m x 0.5 m stripes, axis along +y.
CrossingLayout evaluation_layout();

// Six starting poses around the crossing, reconstructed from the evaluation
// layout drawing (positions and headings approximate).
std::vector<Scenario> evaluation_scenarios(GuidingMode mode = GuidingMode::mono, std::uint64_t seed = 1);

}  // namespace zebra
