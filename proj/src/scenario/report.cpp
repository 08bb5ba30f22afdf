#include "dse/scenario/report.hpp"

#include <nlohmann/json.hpp>

namespace dse {

namespace {

using json = nlohmann::ordered_json;

json filter_json(const FilterMetrics& m) {
    json out;
    for (const auto& [name, value] : metric_values(m)) {
        out[name] = value ? json(*value) : json(nullptr);
    }
    return out;
}

json run_json(const RunMetrics& metrics) {
    json out;
    out["seed"] = metrics.seed;
    out["interval"] = {metrics.interval_start, metrics.interval_end};
    json filters = json::object();
    for (const FilterMetrics& m : metrics.filters) {
        filters[std::string(filter_name(m.kind))] = filter_json(m);
    }
    out["filters"] = filters;
    return out;
}

json header_json(const ScenarioConfig& config) {
    json out;
    out["scenario"] = config.name;
    out["attack"] = std::string(attack_name(config.attack.kind));
    out["chi2_threshold"] = config.detector.chi2_threshold;
    out["euclid_threshold"] = config.detector.euclid_threshold;
    return out;
}

} // namespace

std::string metrics_to_json(const ScenarioConfig& config, const RunMetrics& metrics) {
    json out = header_json(config);
    out["run"] = run_json(metrics);
    return out.dump(2) + "\n";
}

std::string monte_carlo_to_json(const ScenarioConfig& config, const MonteCarloResult& result) {
    json out = header_json(config);
    out["runs"] = result.runs.size();
    json aggregate = json::object();
    for (const auto& [filter, metrics] : result.aggregate) {
        json f = json::object();
        for (const auto& [name, s] : metrics) {
            f[name] = {{"n", s.n},           {"mean", s.mean},       {"stddev", s.stddev},
                       {"ci95_low", s.ci_low}, {"ci95_high", s.ci_high}, {"median", s.median}};
        }
        aggregate[filter] = f;
    }
    out["aggregate"] = aggregate;
    json runs = json::array();
    for (const RunMetrics& run : result.runs) {
        runs.push_back(run_json(run));
    }
    out["per_run"] = runs;
    return out.dump(2) + "\n";
}

} // namespace dse
