#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "zebra/angles.hpp"
#include "zebra/config.hpp"
#include "zebra/error.hpp"
#include "zebra/session.hpp"

using namespace zebra;
namespace fs = std::filesystem;

TEST(ScenarioFile, RoundTripPreservesEverything) {
  Scenario s = evaluation_scenarios(GuidingMode::stereo, 99)[3];
  s.noise.angle_noise_sd = deg_to_rad(2.0);
  s.noise.dropout_probability = 0.05;
  s.policy = AgentPolicy::replay;
  s.locale = Locale::en;
  s.controls = {{0, {1.0, 0.0, 0.0, 0.0}}, {12, {0.0, -0.5, 0.25, 0.1}}};
  s.taps = {3, 40};
  const Scenario back = parse_scenario(scenario_to_json(s));
  EXPECT_EQ(back.name, s.name);
  EXPECT_EQ(back.mode, s.mode);
  EXPECT_EQ(back.seed, s.seed);
  EXPECT_EQ(back.policy, s.policy);
  EXPECT_EQ(back.locale, s.locale);
  EXPECT_EQ(back.controls, s.controls);
  EXPECT_EQ(back.taps, s.taps);
  EXPECT_NEAR(back.start_pose.heading, s.start_pose.heading, 1e-9);
  EXPECT_NEAR(back.layout.orientation, s.layout.orientation, 1e-9);
  EXPECT_NEAR(back.noise.angle_noise_sd, s.noise.angle_noise_sd, 1e-9);
  EXPECT_EQ(back.noise.dropout_probability, s.noise.dropout_probability);
  // Serializing again is stable.
  EXPECT_EQ(scenario_to_json(back), scenario_to_json(s));
}

TEST(ScenarioFile, DegreesInFile) {
  const auto s = parse_scenario(R"({"name":"x","start_pose":{"x":0,"y":-3,"heading_deg":45}})");
  EXPECT_NEAR(s.start_pose.heading, kPi / 4, 1e-15);
  EXPECT_EQ(s.mode, GuidingMode::mono);
}

TEST(ScenarioFile, Errors) {
  EXPECT_THROW(parse_scenario("{"), InvalidArgument);
  EXPECT_THROW(parse_scenario("[]"), InvalidArgument);
  EXPECT_THROW(parse_scenario(R"({"mode":"loud"})"), InvalidArgument);
  EXPECT_THROW(parse_scenario(R"({"policy":"random"})"), InvalidArgument);
  EXPECT_THROW(parse_scenario(R"({"locale":"fr"})"), InvalidArgument);
  EXPECT_THROW(parse_scenario(R"({"layout":{"origin":[1]}})"), InvalidArgument);
  EXPECT_THROW(parse_scenario(R"({"timeout_s":0})"), InvalidArgument);
  EXPECT_THROW(parse_scenario(R"({"controls":[{"tick":5},{"tick":5}]})"), InvalidArgument);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST(EngineConfig, DefaultsAndOverrides) {
  const auto d = parse_engine_config("{}");
  EXPECT_EQ(d.guidance.align_angle_threshold, GuidanceConfig{}.align_angle_threshold);
  const auto c = parse_engine_config(
      R"({"guidance":{"align_angle_threshold_deg":12,"lateral_margin":0.2},"pan_law":{"max_ild_db":15}})");
  EXPECT_NEAR(c.guidance.align_angle_threshold, deg_to_rad(12.0), 1e-15);
  EXPECT_EQ(c.guidance.lateral_margin, 0.2);
  EXPECT_EQ(c.pan_law.max_ild_db, 15.0);
  EXPECT_EQ(c.pan_law.max_itd, PanLaw{}.max_itd);
}

TEST(EngineConfig, Rejections) {
  EXPECT_THROW(parse_engine_config("nope"), InvalidArgument);
  EXPECT_THROW(parse_engine_config(R"({"volume":{}})"), InvalidArgument);
  EXPECT_THROW(parse_engine_config(R"({"guidance":{"speed":1}})"), InvalidArgument);
  EXPECT_THROW(parse_engine_config(R"({"pan_law":{"max_ild_db":-1}})"), InvalidArgument);
  EXPECT_THROW(load_engine_config("/nonexistent/config.json"), IoError);
}

TEST(EngineConfig, EnvironmentVariable) {
  const fs::path path = fs::temp_directory_path() / ("zebra_cfg_" + std::to_string(::getpid()) + ".json");
  {
    std::ofstream out(path);
    out << R"({"pan_law":{"max_itd_ms":0.5}})";
  }
  ::setenv(kConfigEnvVar, path.c_str(), 1);
  EXPECT_DOUBLE_EQ(engine_config_from_env().pan_law.max_itd, 0.0005);
  ::unsetenv(kConfigEnvVar);
  EXPECT_EQ(engine_config_from_env().pan_law.max_itd, PanLaw{}.max_itd);
  fs::remove(path);
}
