#include "zebra/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"

namespace zebra {

using nlohmann::json;

namespace {

struct Field {
  const char* key;
  double* target;
  double scale;  // file unit -> internal unit
};

void apply(const json& section, const char* name, std::initializer_list<Field> fields) {
  if (!section.is_object()) throw InvalidArgument(std::string("config: ") + name + " must be an object");
  for (const auto& [key, value] : section.items()) {
    const Field* match = nullptr;
    for (const Field& f : fields) {
      if (key == f.key) match = &f;
    }
    if (!match) throw InvalidArgument("config: unknown key " + std::string(name) + "." + key);
    if (!value.is_number()) throw InvalidArgument("config: " + std::string(name) + "." + key + " must be a number");
    *match->target = value.get<double>() * match->scale;
  }
}

}  // namespace

EngineConfig parse_engine_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config: top level must be an object");

  EngineConfig c;
  const double deg = deg_to_rad(1.0);
  for (const auto& [key, value] : j.items()) {
    if (key == "guidance") {
      GuidanceConfig& g = c.guidance;
      apply(value, "guidance",
            {{"align_angle_threshold_deg", &g.align_angle_threshold, deg},
             {"release_angle_threshold_deg", &g.release_angle_threshold, deg},
             {"lateral_margin", &g.lateral_margin, 1.0},
             {"pitch_threshold_deg", &g.pitch_threshold, deg},
             {"pitch_release_threshold_deg", &g.pitch_release_threshold, deg},
             {"ahead_max_distance", &g.ahead_max_distance, 1.0},
             {"cross_release_distance", &g.cross_release_distance, 1.0}});
    } else if (key == "pan_law") {
      apply(value, "pan_law", {{"max_ild_db", &c.pan_law.max_ild_db, 1.0}, {"max_itd_ms", &c.pan_law.max_itd, 1e-3}});
    } else {
      throw InvalidArgument("config: unknown section " + key);
    }
  }
  c.guidance.validate();
  c.pan_law.validate();
  return c;
}

EngineConfig load_engine_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_engine_config(text.str());
}

EngineConfig engine_config_from_env() {
  const char* path = std::getenv(kConfigEnvVar);
  if (!path || !*path) return {};
  return load_engine_config(path);
}

}  // namespace zebra
