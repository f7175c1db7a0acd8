#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "savsim/engine.hpp"

namespace savsim {

// Full scenario document with every field present, so dotted overrides can
// be checked against it.
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});

// Sets `dotted.key` in the document. The key must already exist; the value is
// parsed as JSON when possible and otherwise taken as a string. Throws
// invalid_input for unknown keys.
void apply_override(nlohmann::json& doc, std::string_view key, std::string_view value);

// Splits "key=value"; throws invalid_input when there is no '='.
std::pair<std::string, std::string> parse_override(std::string_view assignment);

// Reads a scenario file and returns it normalized: every field present,
// defaults filled in.
nlohmann::json load_scenario_document(const std::filesystem::path& path);

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path);

}  // namespace savsim
