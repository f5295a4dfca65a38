#pragma once

// Engine configuration overrides read from JSON. The CLI loads the file named
// by ZEBRA_SONIFY_CONFIG when it is set.
//
//   {"guidance": {"align_angle_threshold_deg": 10, "lateral_margin": 0.15, ...},
//    "pan_law": {"max_ild_db": 20, "max_itd_ms": 1.0}}
//
// Missing keys keep their defaults; unknown keys are rejected.

#include <filesystem>
#include <string>

#include "zebra/guidance.hpp"
#include "zebra/sonification.hpp"

namespace zebra {

inline constexpr const char* kConfigEnvVar = "ZEBRA_SONIFY_CONFIG";

struct EngineConfig {
  GuidanceConfig guidance;
  PanLaw pan_law;
};

// Throws InvalidArgument on malformed JSON, unknown keys or invalid values.
EngineConfig parse_engine_config(const std::string& json_text);
EngineConfig load_engine_config(const std::filesystem::path& path);

// Defaults, or the file named by the environment variable.
EngineConfig engine_config_from_env();

}  // namespace zebra
