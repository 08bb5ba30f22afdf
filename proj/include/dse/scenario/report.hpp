#pragma once

#include <string>

#include "dse/scenario/harness.hpp"

namespace dse {

// Structured summaries written next to trace files. Missing optional metrics
// (e.g. latency when nothing was detected) serialize as null.
std::string metrics_to_json(const ScenarioConfig& config, const RunMetrics& metrics);
std::string monte_carlo_to_json(const ScenarioConfig& config, const MonteCarloResult& result);

} // namespace dse
