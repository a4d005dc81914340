#pragma once

#include <filesystem>
#include <string>

#include "cocarry/sim.hpp"

namespace cocarry {

/// Built-in coupling presets mirroring the three object classes:
/// "experiment_object" (anisotropic), "rope", "aluminum_profile" (rigid rod).
CouplingModel coupling_preset(const std::string& name);

/// Scenario with a named coupling preset, the standard experiment path and
/// all controller defaults.
ScenarioConfig preset_scenario(const std::string& coupling_name);

/// Parses the line-oriented sectioned key-value scenario format. Unknown
/// sections or keys and out-of-range values raise ConfigError with the file
/// name and line number.
ScenarioConfig parse_scenario(const std::filesystem::path& file);
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& name = "<string>");

/// Canonical serialization; parsing it back yields an equivalent config.
std::string serialize_scenario(const ScenarioConfig& config);

/// Writes content to path atomically (temp file + rename).
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cocarry
