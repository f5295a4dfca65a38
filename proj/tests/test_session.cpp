#include <gtest/gtest.h>

#include <cmath>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"
#include "zebra/session.hpp"

using namespace zebra;

namespace {

int count_kind(const SessionMetrics& m, const std::string& kind) {
  int n = 0;
  for (const auto& e : m.event_log) n += e.kind == kind;
  return n;
}

Scenario noisy(Scenario s) {
  s.noise.angle_noise_sd = deg_to_rad(2.0);
  s.noise.distance_noise_sd = 0.1;
  s.noise.dropout_probability = 0.05;
  return s;
}

}  // namespace

TEST(Session, PolicyNames) {
  for (auto p : {AgentPolicy::instruction_follower, AgentPolicy::proportional_follower, AgentPolicy::replay}) {
    EXPECT_EQ(parse_policy(policy_name(p)), p);
  }
  EXPECT_FALSE(parse_policy("random"));
}

TEST(Session, EvaluationStartsAreOffTheCrossing) {
  const auto all = evaluation_scenarios();
  ASSERT_EQ(all.size(), 6u);
  for (const auto& s : all) EXPECT_FALSE(on_crossing(s.start_pose, s.layout)) << s.name;
}

TEST(Session, StartOneCompletesInEveryMode) {
  for (auto mode : {GuidingMode::speech, GuidingMode::mono, GuidingMode::stereo}) {
    const auto r = run_scripted(evaluation_scenarios(mode).front());
    EXPECT_TRUE(r.metrics.completed);
    ASSERT_TRUE(r.metrics.time_to_align && r.metrics.time_to_cross);
    EXPECT_LT(*r.metrics.time_to_align + *r.metrics.time_to_cross, 120.0);
    // The last instruction issued is Cross and the log ends at the far edge.
    std::string last_instruction;
    for (const auto& e : r.metrics.event_log) {
      if (e.kind == "instruction") last_instruction = e.payload;
    }
    EXPECT_EQ(last_instruction.rfind("name=cross;", 0), 0u);
    EXPECT_EQ(r.metrics.event_log.back().kind, "complete");
  }
}

TEST(Session, AlreadyAlignedHasZeroAlignTime) {
  Scenario s = evaluation_scenarios().front();
  s.start_pose = {0.0, 0.1, kPi / 2, 0.0};
  const auto r = run_scripted(s);
  ASSERT_TRUE(r.metrics.time_to_align);
  EXPECT_EQ(*r.metrics.time_to_align, 0.0);
  EXPECT_TRUE(r.metrics.completed);
}

TEST(Session, SameSeedIsByteIdentical) {
  const Scenario s = noisy(evaluation_scenarios(GuidingMode::stereo, 42)[4]);
  const auto a = run_scripted(s), b = run_scripted(s);
  EXPECT_EQ(event_log_csv(a.metrics.event_log), event_log_csv(b.metrics.event_log));
  EXPECT_EQ(metrics_csv({a.metrics}), metrics_csv({b.metrics}));
}

TEST(Session, MessageCountEqualsInstructionTransitions) {
  for (const auto& s : evaluation_scenarios(GuidingMode::mono, 3)) {
    const auto r = run_scripted(noisy(s));
    EXPECT_EQ(r.metrics.message_count, count_kind(r.metrics, "instruction")) << s.name;
  }
}

TEST(Session, SpeechModeEmitsSpeechOnTransitionsOnly) {
  const auto r = run_scripted(evaluation_scenarios(GuidingMode::speech)[1]);
  EXPECT_EQ(count_kind(r.metrics, "speech"), r.metrics.message_count);
  EXPECT_EQ(count_kind(r.metrics, "audio"), 0);
  EXPECT_TRUE(r.audio_events.empty());
}

TEST(Session, TimeoutFlagsIncomplete) {
  Scenario s = evaluation_scenarios().front();
  s.timeout_s = 1.0;
  const auto r = run_scripted(s);
  EXPECT_FALSE(r.metrics.completed);
  EXPECT_EQ(r.metrics.event_log.back().kind, "timeout");
  EXPECT_NEAR(r.metrics.duration, 1.0, 1e-9);
}

TEST(Session, TapsProduceSpokenHints) {
  Scenario s = evaluation_scenarios(GuidingMode::mono).front();
  s.taps = {0, 45};
  const auto r = run_scripted(s);
  EXPECT_EQ(r.metrics.tap_count, 2);
  EXPECT_EQ(count_kind(r.metrics, "tap"), 2);
  EXPECT_EQ(count_kind(r.metrics, "speech"), 2);
}

TEST(Session, ReplayReproducesEventLog) {
  Scenario s = noisy(evaluation_scenarios(GuidingMode::mono, 11)[2]);
  s.taps = {10, 100};
  const auto original = run_scripted(s);
  Scenario replay = s;
  replay.policy = AgentPolicy::replay;
  replay.controls = original.control_log;
  const auto again = run_scripted(replay);
  EXPECT_EQ(event_log_csv(original.metrics.event_log), event_log_csv(again.metrics.event_log));
}

TEST(Session, ReplayLookup) {
  const std::vector<ControlChange> log = {{0, {1, 0, 0, 0}}, {5, {0, 1, 0, 0}}};
  EXPECT_EQ(replay_control(log, 0).forward_speed, 1.0);
  EXPECT_EQ(replay_control(log, 4).forward_speed, 1.0);
  EXPECT_EQ(replay_control(log, 5).turn_rate, 1.0);
  EXPECT_EQ(replay_control({}, 5), Control{});
}

TEST(Session, ProportionalFollowerCompletes) {
  for (const auto& s0 : evaluation_scenarios()) {
    Scenario s = s0;
    s.policy = AgentPolicy::proportional_follower;
    EXPECT_TRUE(run_scripted(s).metrics.completed) << s.name;
  }
}

TEST(Session, PolicyControlFollowsInstruction) {
  const auto p = AgentPolicy::instruction_follower;
  EXPECT_NEAR(policy_control(p, {Instruction::RotateRight, 1.0, 0}).turn_rate, -deg_to_rad(30.0), 1e-12);
  EXPECT_NEAR(policy_control(p, {Instruction::RotateLeft, 1.0, 0}).turn_rate, deg_to_rad(30.0), 1e-12);
  EXPECT_EQ(policy_control(p, {Instruction::StepLeft, 1.0, 0}).sidestep_speed, 0.5);
  EXPECT_EQ(policy_control(p, {Instruction::StepRight, 1.0, 0}).sidestep_speed, -0.5);
  EXPECT_EQ(policy_control(p, {Instruction::CrosswalkAhead, 3.0, 0}).forward_speed, 1.0);
  EXPECT_LT(policy_control(p, {Instruction::Raise, 0.3, 0}).pitch_rate, 0.0);
  // Proportional speeds grow with the quantity.
  const auto q = AgentPolicy::proportional_follower;
  EXPECT_LT(std::fabs(policy_control(q, {Instruction::RotateRight, 0.3, 0}).turn_rate),
            std::fabs(policy_control(q, {Instruction::RotateRight, 0.6, 0}).turn_rate));
}

TEST(Session, GyroFusionFillsBetweenRecognitions) {
  Scenario s = evaluation_scenarios().front();
  Session session(s);
  // Turn steadily; after the first recognition the fused rotation tracks the
  // true rotation on every tick (noiseless gyro).
  const Control turn{0.0, deg_to_rad(20.0), 0.0, 0.0};
  for (int i = 0; i < 12; ++i) {
    session.tick(turn, false);
    const auto& m = session.measures();
    if (!m.valid) continue;
    const auto truth = compute_relative_measures(session.world().agent, s.layout);
    // measures() reflects the pose before this tick's motion.
    EXPECT_NEAR(wrap_angle(m.horizontal_rotation - truth.horizontal_rotation), -deg_to_rad(20.0) / 30.0, 1e-9);
  }
}

TEST(Session, MeasureTrackerLosesAfterMisses) {
  MeasureTracker t(3);
  RelativeMeasures m{0.1, 2, 4.5, 1.25, 1.25, true};
  t.on_recognition(m, 0.0, 0.0);
  EXPECT_TRUE(t.current(0.0).valid);
  t.on_recognition({}, 0.0, 0.1);
  t.on_recognition({}, 0.0, 0.2);
  EXPECT_TRUE(t.current(0.0).valid);
  t.on_recognition({}, 0.0, 0.3);
  EXPECT_FALSE(t.current(0.0).valid);
  t.on_recognition(m, 0.0, 0.4);
  EXPECT_TRUE(t.current(0.0).valid);
}

TEST(Session, FinishedSessionRejectsTicks) {
  Scenario s = evaluation_scenarios().front();
  s.timeout_s = 0.05;
  Session session(s);
  while (!session.finished()) session.tick(Control{}, false);
  EXPECT_THROW(session.tick(Control{}, false), StateError);
}

TEST(Session, AbortFlags) {
  Session session(evaluation_scenarios().front());
  session.tick(Control{}, false);
  session.abort("test");
  EXPECT_TRUE(session.finished());
  EXPECT_TRUE(session.metrics().aborted);
  EXPECT_EQ(session.metrics().event_log.back().kind, "abort");
}

TEST(Metrics, SummaryArithmetic) {
  SessionMetrics a, b;
  a.mode = b.mode = GuidingMode::mono;
  a.time_to_align = 10.0;
  b.time_to_align = 20.0;
  a.message_count = 3;
  b.message_count = 5;
  auto s = metrics_summary({a});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].align_mean, 10.0);
  EXPECT_EQ(s[0].align_sd, 0.0);
  s = metrics_summary({a, b});
  EXPECT_EQ(s[0].align_mean, 15.0);
  EXPECT_NEAR(s[0].align_sd, std::sqrt(50.0), 1e-12);
  EXPECT_EQ(s[0].messages_mean, 4.0);
  EXPECT_THROW(metrics_summary({}), InvalidArgument);
}

TEST(Metrics, TwelveRunFixture) {
  // Means and sample SDs computed by hand (spreadsheet AVERAGE / STDEV.S).
  const double align[12] = {24, 31, 18, 27, 22, 30, 29, 35, 26, 28, 24, 32};
  const double cross[12] = {10, 12, 9, 11, 8, 10, 14, 15, 13, 12, 11, 9};
  std::vector<SessionMetrics> runs;
  for (int i = 0; i < 12; ++i) {
    SessionMetrics m;
    m.mode = i < 6 ? GuidingMode::mono : GuidingMode::stereo;
    m.time_to_align = align[i];
    m.time_to_cross = cross[i];
    m.message_count = i;
    m.tap_count = i % 3;
    runs.push_back(m);
  }
  const auto s = metrics_summary(runs);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].align_mean, 25.333333333333333, 1e-12);
  EXPECT_NEAR(s[0].align_sd, 4.966554808583780, 1e-12);
  EXPECT_NEAR(s[0].cross_mean, 10.0, 1e-12);
  EXPECT_NEAR(s[0].cross_sd, 1.414213562373095, 1e-12);
  EXPECT_NEAR(s[1].align_mean, 29.0, 1e-12);
  EXPECT_NEAR(s[1].align_sd, 4.0, 1e-12);
  EXPECT_NEAR(s[1].cross_mean, 12.333333333333333, 1e-12);
  EXPECT_NEAR(s[1].messages_mean, 8.5, 1e-12);
  EXPECT_NEAR(s[1].taps_mean, 1.0, 1e-12);
}

TEST(Metrics, CsvShapes) {
  const auto r = run_scripted(evaluation_scenarios().front());
  const auto csv = metrics_csv({r.metrics});
  EXPECT_EQ(csv.rfind("scenario,mode,seed,completed,aborted,time_to_align,time_to_cross,message_count,tap_count,duration\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto log = event_log_csv(r.metrics.event_log);
  EXPECT_EQ(log.rfind("time_s,kind,payload\n", 0), 0u);
}
