#pragma once

#include <string>

#include "plab/analysis.hpp"

namespace plab {

/// Built-in experiments: "bmo-log", "sharp-theta", "rough-media", "smooth-media".
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Plain-text key=value scenario files (sections mirror the Scenario fields).
std::string scenario_to_config(const Scenario& s);
Scenario scenario_from_config(const std::string& text);
Scenario load_scenario_file(const std::string& path);

}  // namespace plab
