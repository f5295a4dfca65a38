// Scenario files. Angles in the file are degrees (fields end in _deg);
// recorded control logs keep rad/s so replays reproduce bit for bit.

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"
#include "zebra/session.hpp"

namespace zebra {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

double deg_or(const json& j, const char* key, double fallback_rad) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback_rad;
  return deg_to_rad(it->get<double>());
}

// Degrees as written to files, rounded to 1e-9 deg so 30 deg reads as 30.
double file_deg(double rad) { return std::round(rad_to_deg(rad) * 1e9) / 1e9; }

CrossingLayout parse_layout(const json& j) {
  CrossingLayout l;
  if (auto it = j.find("origin"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw InvalidArgument("scenario: layout.origin must be [x, y]");
    l.origin = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  l.orientation = deg_or(j, "orientation_deg", l.orientation);
  l.stripe_count = get_or(j, "stripe_count", l.stripe_count);
  l.stripe_width = get_or(j, "stripe_width", l.stripe_width);
  l.stripe_length = get_or(j, "stripe_length", l.stripe_length);
  return l;
}

Pose parse_pose(const json& j) {
  Pose p;
  p.x = get_or(j, "x", 0.0);
  p.y = get_or(j, "y", 0.0);
  p.heading = wrap_angle(deg_or(j, "heading_deg", 0.0));
  p.pitch = deg_or(j, "pitch_deg", 0.0);
  return p;
}

RecognizerModel parse_noise(const json& j) {
  RecognizerModel m;
  m.fov_half_angle = deg_or(j, "fov_half_angle_deg", m.fov_half_angle);
  m.max_range = get_or(j, "max_range", m.max_range);
  m.rate = get_or(j, "rate", m.rate);
  m.angle_noise_sd = deg_or(j, "angle_noise_sd_deg", m.angle_noise_sd);
  m.distance_noise_sd = get_or(j, "distance_noise_sd", m.distance_noise_sd);
  m.dropout_probability = get_or(j, "dropout_probability", m.dropout_probability);
  m.gyro_noise_sd = deg_or(j, "gyro_noise_sd_deg", m.gyro_noise_sd);
  return m;
}

Control parse_control(const json& j) {
  Control c;
  c.forward_speed = get_or(j, "forward_speed", 0.0);
  c.turn_rate = get_or(j, "turn_rate", 0.0);
  c.sidestep_speed = get_or(j, "sidestep_speed", 0.0);
  c.pitch_rate = get_or(j, "pitch_rate", 0.0);
  return c;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("scenario: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("scenario: top level must be an object");

  Scenario s;
  try {
    s.name = get_or<std::string>(j, "name", s.name);
    if (j.contains("layout")) s.layout = parse_layout(j.at("layout"));
    if (j.contains("start_pose")) s.start_pose = parse_pose(j.at("start_pose"));
    if (j.contains("mode")) {
      auto mode = parse_mode(j.at("mode").get<std::string>());
      if (!mode) throw InvalidArgument("scenario: unknown mode " + j.at("mode").dump());
      s.mode = *mode;
    }
    s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
    if (j.contains("noise")) s.noise = parse_noise(j.at("noise"));
    if (j.contains("policy")) {
      auto policy = parse_policy(j.at("policy").get<std::string>());
      if (!policy) throw InvalidArgument("scenario: unknown policy " + j.at("policy").dump());
      s.policy = *policy;
    }
    s.timeout_s = get_or(j, "timeout_s", s.timeout_s);
    if (j.contains("locale")) {
      const auto loc = j.at("locale").get<std::string>();
      if (loc == "it") s.locale = Locale::it;
      else if (loc == "en") s.locale = Locale::en;
      else throw InvalidArgument("scenario: unknown locale " + loc);
    }
    for (const auto& c : j.value("controls", json::array())) {
      s.controls.push_back({c.at("tick").get<std::int64_t>(), parse_control(c)});
    }
    for (const auto& t : j.value("taps", json::array())) s.taps.push_back(t.get<std::int64_t>());
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["layout"] = {{"origin", {s.layout.origin.x, s.layout.origin.y}},
                 {"orientation_deg", file_deg(s.layout.orientation)},
                 {"stripe_count", s.layout.stripe_count},
                 {"stripe_width", s.layout.stripe_width},
                 {"stripe_length", s.layout.stripe_length}};
  j["start_pose"] = {{"x", s.start_pose.x},
                     {"y", s.start_pose.y},
                     {"heading_deg", file_deg(s.start_pose.heading)},
                     {"pitch_deg", file_deg(s.start_pose.pitch)}};
  j["mode"] = std::string(mode_name(s.mode));
  j["seed"] = s.seed;
  j["noise"] = {{"fov_half_angle_deg", file_deg(s.noise.fov_half_angle)},
                {"max_range", s.noise.max_range},
                {"rate", s.noise.rate},
                {"angle_noise_sd_deg", file_deg(s.noise.angle_noise_sd)},
                {"distance_noise_sd", s.noise.distance_noise_sd},
                {"dropout_probability", s.noise.dropout_probability},
                {"gyro_noise_sd_deg", file_deg(s.noise.gyro_noise_sd)}};
  j["policy"] = std::string(policy_name(s.policy));
  j["timeout_s"] = s.timeout_s;
  j["locale"] = s.locale == Locale::it ? "it" : "en";
  if (!s.controls.empty()) {
    json controls = json::array();
    for (const auto& c : s.controls) {
      controls.push_back({{"tick", c.tick},
                          {"forward_speed", c.control.forward_speed},
                          {"turn_rate", c.control.turn_rate},
                          {"sidestep_speed", c.control.sidestep_speed},
                          {"pitch_rate", c.control.pitch_rate}});
    }
    j["controls"] = std::move(controls);
  }
  if (!s.taps.empty()) j["taps"] = s.taps;
  return j.dump(2) + "\n";
}

CrossingLayout evaluation_layout() {
  CrossingLayout l;
  l.origin = {0.0, 0.0};
  l.orientation = deg_to_rad(90.0);
  return l;
}

std::vector<Scenario> evaluation_scenarios(GuidingMode mode, std::uint64_t seed) {
  struct Start {
    double x, y, heading_deg;
  };
  // Crossing near edge at the origin, stripes spanning y in [0, 2.5].
  static constexpr Start kStarts[] = {
      {0.0, -4.0, 135.0}, {-3.0, -3.0, 60.0}, {3.0, -3.0, 120.0},
      {-1.5, -6.0, 90.0}, {2.0, -5.0, 45.0},  {0.5, -7.0, 180.0},
  };
  std::vector<Scenario> out;
  int index = 1;
  for (const Start& st : kStarts) {
    Scenario s;
    s.name = "start" + std::to_string(index++);
    s.layout = evaluation_layout();
    s.start_pose = {st.x, st.y, wrap_angle(deg_to_rad(st.heading_deg)), 0.0};
    s.mode = mode;
    s.seed = seed;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace zebra
