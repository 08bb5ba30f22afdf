#pragma once

#include <string>
#include <vector>

#include "dse/detection.hpp"
#include "dse/scenario/trace.hpp"

namespace dse::plot {

enum class Channel { delta, domega, eq_prime, ed_prime, y, g, d };

std::string channel_name(Channel channel);

// "delta, domega, ..." for help and error messages.
std::string channel_list();

/// Empty input selects the four state channels. Unknown names throw
/// ConfigError listing the valid ones.
std::vector<Channel> parse_channels(const std::vector<std::string>& names);

/// One panel per channel. State panels overlay truth and every filter's
/// estimate; y overlays clean and attacked measurements; g and d draw each
/// filter plus a dashed horizontal threshold line.
std::string render_svg(const ScenarioTrace& trace, const std::vector<Channel>& channels,
                       const DetectorConfig& detector);

} // namespace dse::plot
