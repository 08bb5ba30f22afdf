#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dse/scenario/config.hpp"

namespace dse {

std::vector<std::string> preset_names();

// YAML text of a shipped preset; throws ConfigError listing valid names.
std::string preset_text(std::string_view name);

ScenarioConfig load_preset(std::string_view name);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& preset_table();
} // namespace detail

} // namespace dse
