#include "dse/scenario/presets.hpp"

#include "dse/errors.hpp"

namespace dse {

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : detail::preset_table()) {
        names.emplace_back(name);
    }
    return names;
}

std::string preset_text(std::string_view name) {
    for (const auto& [preset, text] : detail::preset_table()) {
        if (preset == name) {
            return std::string(text);
        }
    }
    std::string valid;
    for (const auto& n : preset_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + valid + ")");
}

ScenarioConfig load_preset(std::string_view name) { return parse_config(preset_text(name)); }

} // namespace dse
