#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opennca/case_study.hpp"

namespace opennca::cli {

/// Strict parse: unknown keys, wrong types and missing required fields raise
/// ConfigError with the dotted field path. The result is validated.
case_study::RunConfig parse_config(const nlohmann::json& doc);

/// IoError if the file cannot be read, ConfigError if it is not valid JSON.
case_study::RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const case_study::RunConfig& cfg);

/// Built-in parameter sets. `sweep_param`/`sweep_values` are the defaults used
/// by `sweep` when the preset is given without explicit values.
struct Preset {
  std::string name;
  case_study::RunConfig config;
  std::string sweep_param;
  std::vector<double> sweep_values;
};

std::vector<std::string> preset_names();
/// ConfigError("preset", ...) for unknown names.
Preset preset(const std::string& name);

}  // namespace opennca::cli
