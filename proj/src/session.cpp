#include "zebra/session.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"
#include "zebra/synthesis.hpp"

namespace zebra {

std::string_view policy_name(AgentPolicy policy) {
  switch (policy) {
    case AgentPolicy::instruction_follower: return "instruction_follower";
    case AgentPolicy::proportional_follower: return "proportional_follower";
    case AgentPolicy::replay: return "replay";
  }
  return "unknown";
}

std::optional<AgentPolicy> parse_policy(std::string_view name) {
  if (name == "instruction_follower") return AgentPolicy::instruction_follower;
  if (name == "proportional_follower") return AgentPolicy::proportional_follower;
  if (name == "replay") return AgentPolicy::replay;
  return std::nullopt;
}

void Scenario::validate() const {
  layout.validate();
  noise.validate();
  if (!(timeout_s > 0.0)) throw InvalidArgument("scenario: timeout_s must be > 0");
  for (std::size_t i = 1; i < controls.size(); ++i) {
    if (controls[i].tick <= controls[i - 1].tick) {
      throw InvalidArgument("scenario: control ticks must be strictly increasing");
    }
  }
}

// --- MeasureTracker -------------------------------------------------------

void MeasureTracker::on_recognition(const RelativeMeasures& m, double gyro_heading, double time) {
  if (!m.valid) {
    ++missed_;
    return;
  }
  fusion_.on_recognition(m.horizontal_rotation, gyro_heading, time);
  last_ = m;
  missed_ = 0;
}

RelativeMeasures MeasureTracker::current(double gyro_heading) const {
  if (!fusion_.initialized() || missed_ >= lost_after_) return {};
  RelativeMeasures m = last_;
  m.horizontal_rotation = fuse_heading(fusion_, gyro_heading);
  return m;
}

// --- Session --------------------------------------------------------------

namespace {

std::string decision_payload(const GuidanceDecision& d) {
  return fmt::format("name={};quantity={:.6f};bias={:.6f}", instruction_name(d.instruction), d.quantity,
                     d.lateral_bias);
}

std::string audio_payload(const AudioEvent& e) {
  return fmt::format("instruction={};f0={:.3f};duration={:.3f};pan={:.6f};gain_db={:.3f}",
                     instruction_name(e.instruction), e.stimulus.fundamental, e.stimulus.duration, e.pan,
                     e.gain_offset_db);
}

std::string speech_payload(const SpeechEvent& e, std::string_view source) {
  return fmt::format("instruction={};source={};text={}", instruction_name(e.instruction), source, e.text);
}

std::uint64_t gyro_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ull; }

}  // namespace

Session::Session(const Scenario& scenario, SessionOptions options)
    : scenario_(scenario),
      options_(options),
      world_{scenario.layout, scenario.start_pose, 0.0, scenario.seed},
      recognition_rng_(scenario.seed),
      gyro_rng_(gyro_seed(scenario.seed)),
      tracker_(options.lost_after),
      scheduler_(scenario.mode,
                 [&] {
                   SonificationConfig s = options.sonification;
                   s.align_angle_threshold = options.guidance.align_angle_threshold;
                   s.pitch_threshold = options.guidance.pitch_threshold;
                   return s;
                 }(),
                 scenario.locale) {
  scenario_.validate();
  options_.guidance.validate();
  world_.agent.heading = wrap_angle(world_.agent.heading);
  recognition_interval_ = std::max<std::int64_t>(1, std::llround(kControlRate / scenario.noise.rate));
  gyro_heading_ = world_.agent.heading;
  metrics_.scenario = scenario.name;
  metrics_.mode = scenario.mode;
  metrics_.seed = scenario.seed;
  if (on_crossing(world_.agent, world_.layout)) {
    aligned_ = true;
    metrics_.time_to_align = 0.0;
    log(0.0, "align", "");
  }
}

void Session::log(double time, std::string kind, std::string payload) {
  metrics_.event_log.push_back({time, std::move(kind), std::move(payload)});
}

void Session::finish(bool completed, const char* kind) {
  finished_ = true;
  metrics_.completed = completed;
  metrics_.duration = world_.time;
  log(world_.time, kind, "");
}

void Session::abort(const std::string& reason) {
  if (finished_) return;
  finished_ = true;
  metrics_.aborted = true;
  metrics_.duration = world_.time;
  log(world_.time, "abort", "reason=" + reason);
}

TickResult Session::tick(const Control& control, bool tap) {
  return tick([&](const GuidanceDecision&) { return control; }, tap);
}

TickResult Session::tick(const Agent& agent, bool tap) {
  if (finished_) throw StateError("session already finished");
  const double now = world_.time;
  const double dt = 1.0 / kControlRate;
  TickResult result;

  if (tick_ % recognition_interval_ == 0) {
    tracker_.on_recognition(simulated_recognition(world_, scenario_.noise, recognition_rng_), gyro_heading_, now);
  }
  measures_ = tracker_.current(gyro_heading_);
  const double ideal = options_.ideal_capture_angle;
  const double pitch = pitch_from_gravity(gravity_for_pitch(world_.agent.pitch, ideal), ideal);

  decision_ = next_instruction(measures_, pitch, options_.guidance, previous_);
  result.decision = decision_;
  if (!previous_ || *previous_ != decision_.instruction) {
    previous_ = decision_.instruction;
    result.instruction_changed = true;
    ++metrics_.message_count;
    log(now, "instruction", decision_payload(decision_));
  }

  if (tap) {
    ++metrics_.tap_count;
    tap_log_.push_back(tick_);
    log(now, "tap", fmt::format("instruction={}", instruction_name(decision_.instruction)));
    SpeechEvent hint = tap_hint(decision_, scenario_.locale, now);
    log(now, "speech", speech_payload(hint, "tap"));
    result.speech.push_back(std::move(hint));
  }

  for (auto& event : scheduler_.advance(decision_, dt)) {
    if (auto* audio = std::get_if<AudioEvent>(&event)) {
      log(audio->time, "audio", audio_payload(*audio));
      audio_events_.push_back(*audio);
      result.audio.push_back(std::move(*audio));
    } else {
      auto& speech = std::get<SpeechEvent>(event);
      log(speech.time, "speech", speech_payload(speech, "transition"));
      result.speech.push_back(std::move(speech));
    }
  }

  const Control control = agent(decision_);
  if (control_log_.empty() || control_log_.back().control != control) {
    control_log_.push_back({tick_, control});
  }

  const double heading_before = world_.agent.heading;
  world_ = step_world(world_, control, dt);
  gyro_heading_ = wrap_angle(gyro_heading_ + wrap_angle(world_.agent.heading - heading_before) +
                             gyro_rng_.gaussian(scenario_.noise.gyro_noise_sd * std::sqrt(dt)));
  ++tick_;

  if (!aligned_ && on_crossing(world_.agent, world_.layout)) {
    aligned_ = true;
    metrics_.time_to_align = world_.time;
    log(world_.time, "align", "");
  }
  if (aligned_ && crossing_complete(world_.agent, world_.layout)) {
    metrics_.time_to_cross = world_.time - *metrics_.time_to_align;
    finish(true, "complete");
  } else if (world_.time >= scenario_.timeout_s - 1e-9) {
    finish(false, "timeout");
  }
  result.finished = finished_;
  return result;
}

// --- Policies -------------------------------------------------------------

Control policy_control(AgentPolicy policy, const GuidanceDecision& d) {
  const double turn = deg_to_rad(30.0);
  const double pitch_rate = deg_to_rad(20.0);
  const bool proportional = policy == AgentPolicy::proportional_follower;
  Control c;
  switch (d.instruction) {
    case Instruction::RotateLeft:
    case Instruction::RotateRight: {
      const double rate = proportional ? std::clamp(1.5 * d.quantity, deg_to_rad(10.0), deg_to_rad(60.0)) : turn;
      c.turn_rate = d.instruction == Instruction::RotateLeft ? rate : -rate;
      break;
    }
    case Instruction::StepLeft:
    case Instruction::StepRight: {
      const double speed = proportional ? std::clamp(d.quantity, 0.1, 0.8) : 0.5;
      c.sidestep_speed = d.instruction == Instruction::StepLeft ? speed : -speed;
      break;
    }
    case Instruction::NotFound:
      c.turn_rate = turn;
      break;
    case Instruction::CrosswalkAhead:
      c.forward_speed = proportional ? std::clamp(0.5 * d.quantity, 0.5, 1.2) : 1.0;
      break;
    case Instruction::Cross:
      c.forward_speed = 1.0;
      if (proportional) {
        c.sidestep_speed = -0.6 * d.lateral_bias;
      } else if (std::fabs(d.lateral_bias) > 0.5) {
        c.sidestep_speed = d.lateral_bias < 0.0 ? 0.5 : -0.5;
      }
      break;
    case Instruction::Raise:
    case Instruction::Lower: {
      const double rate = proportional ? std::clamp(1.5 * d.quantity, deg_to_rad(5.0), deg_to_rad(40.0)) : pitch_rate;
      c.pitch_rate = d.instruction == Instruction::Raise ? -rate : rate;
      break;
    }
  }
  return c;
}

Control replay_control(const std::vector<ControlChange>& log, std::int64_t tick) {
  auto it = std::upper_bound(log.begin(), log.end(), tick,
                             [](std::int64_t t, const ControlChange& c) { return t < c.tick; });
  if (it == log.begin()) return {};
  return std::prev(it)->control;
}

SessionResult run_scripted(const Scenario& scenario, SessionOptions options) {
  Session session(scenario, options);
  std::size_t next_tap = 0;
  std::vector<std::int64_t> taps = scenario.taps;
  std::sort(taps.begin(), taps.end());
  while (!session.finished()) {
    const std::int64_t tick = session.tick_index();
    bool tap = false;
    while (next_tap < taps.size() && taps[next_tap] <= tick) {
      tap = tap || taps[next_tap] == tick;
      ++next_tap;
    }
    if (scenario.policy == AgentPolicy::replay) {
      session.tick(replay_control(scenario.controls, tick), tap);
    } else {
      session.tick([&](const GuidanceDecision& d) { return policy_control(scenario.policy, d); }, tap);
    }
  }
  return {session.metrics(), session.audio_events(), session.control_log()};
}

SessionResult run_scripted(const Scenario& scenario, GuidingMode mode, AgentPolicy policy, SessionOptions options) {
  Scenario s = scenario;
  s.mode = mode;
  s.policy = policy;
  return run_scripted(s, options);
}

std::size_t session_audio_frames(const SessionResult& result, int sample_rate, std::size_t block_frames) {
  const PanLaw law;
  auto frames = static_cast<std::int64_t>(std::ceil(result.metrics.duration * sample_rate));
  for (const AudioEvent& e : result.audio_events) {
    const std::int64_t start = std::llround(e.time * sample_rate);
    const std::int64_t len = std::llround(e.stimulus.duration * sample_rate) +
                             std::llround(law.max_itd * sample_rate);
    frames = std::max(frames, start + len);
  }
  const auto blocks = (static_cast<std::size_t>(frames) + block_frames - 1) / block_frames;
  return blocks * block_frames;
}

// --- Logs and summaries ---------------------------------------------------

std::string event_log_csv(const std::vector<EventRecord>& log) {
  std::string out = "time_s,kind,payload\n";
  for (const auto& e : log) out += fmt::format("{:.6f},{},{}\n", e.time, e.kind, e.payload);
  return out;
}

namespace {

std::string optional_field(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& values) {
  if (values.empty()) return {std::nan(""), std::nan("")};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

std::string metrics_csv(const std::vector<SessionMetrics>& runs) {
  std::string out =
      "scenario,mode,seed,completed,aborted,time_to_align,time_to_cross,message_count,tap_count,duration\n";
  for (const auto& m : runs) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{:.6f}\n", m.scenario, mode_name(m.mode), m.seed,
                       m.completed ? 1 : 0, m.aborted ? 1 : 0, optional_field(m.time_to_align),
                       optional_field(m.time_to_cross), m.message_count, m.tap_count, m.duration);
  }
  return out;
}

std::vector<ModeSummary> metrics_summary(const std::vector<SessionMetrics>& runs) {
  if (runs.empty()) throw InvalidArgument("metrics_summary: no sessions");
  std::vector<ModeSummary> summary;
  for (GuidingMode mode : {GuidingMode::speech, GuidingMode::mono, GuidingMode::stereo}) {
    std::vector<double> align, cross, messages, taps;
    ModeSummary s;
    s.mode = mode;
    for (const auto& m : runs) {
      if (m.mode != mode) continue;
      ++s.runs;
      if (m.completed) ++s.completed;
      if (m.time_to_align) align.push_back(*m.time_to_align);
      if (m.time_to_cross) cross.push_back(*m.time_to_cross);
      messages.push_back(m.message_count);
      taps.push_back(m.tap_count);
    }
    if (s.runs == 0) continue;
    const auto a = mean_sd(align), c = mean_sd(cross), msg = mean_sd(messages), t = mean_sd(taps);
    s.align_mean = a.mean, s.align_sd = a.sd;
    s.cross_mean = c.mean, s.cross_sd = c.sd;
    s.messages_mean = msg.mean, s.messages_sd = msg.sd;
    s.taps_mean = t.mean, s.taps_sd = t.sd;
    summary.push_back(s);
  }
  return summary;
}

std::string summary_csv(const std::vector<ModeSummary>& summary) {
  std::string out =
      "mode,runs,completed,align_mean,align_sd,cross_mean,cross_sd,messages_mean,messages_sd,taps_mean,taps_sd\n";
  for (const auto& s : summary) {
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", mode_name(s.mode),
                       s.runs, s.completed, s.align_mean, s.align_sd, s.cross_mean, s.cross_sd, s.messages_mean,
                       s.messages_sd, s.taps_mean, s.taps_sd);
  }
  return out;
}

}  // namespace zebra
