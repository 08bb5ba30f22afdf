#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dse/scenario/config.hpp"
#include "dse/scenario/trace.hpp"

namespace dse {

struct FilterMetrics {
    FilterKind kind = FilterKind::ckf;
    std::array<double, 4> rmse{};  // per state over the metrics interval
    double mean_error_norm = 0.0;  // time-average of ||x_true - x_est|| over the interval
    std::optional<double> chi2_false_alarm_rate; // samples outside the attack window
    std::optional<double> mean_g;                // mean chi-square statistic outside the attack window
    std::optional<double> chi2_latency;          // first alarm time - attack start
    std::optional<double> euclid_latency;
    std::optional<double> chi2_duty;             // fraction of attack-window samples in alarm
    std::optional<double> euclid_duty;
    double min_cov_eigenvalue = 0.0;             // smallest covariance eigenvalue seen in the run
};

struct RunMetrics {
    std::uint64_t seed = 0;
    double interval_start = 0.0;
    double interval_end = 0.0;
    std::vector<FilterMetrics> filters;

    const FilterMetrics& of(FilterKind kind) const;
};

struct ScenarioResult {
    ScenarioTrace trace;
    RunMetrics metrics;
};

/// Full horizon, unless a fault ([fault_time, horizon]) or an attack (its
/// window) is configured; metrics.interval overrides.
std::pair<double, double> default_metrics_interval(const ScenarioConfig& config);

/// Truth simulation, attack injection, every selected filter and its detectors.
/// Deterministic in (config, config.noise.seed). Numerical failures are rethrown
/// with the step index prepended.
ScenarioResult run_scenario(const ScenarioConfig& config);

RunMetrics compute_metrics(const ScenarioConfig& config, const ScenarioTrace& trace,
                           std::span<const double> min_cov_eigenvalues);

// Per-filter squared estimation error ||x_true - x_est||^2 at every row.
std::vector<double> squared_errors(const ScenarioTrace& trace, FilterKind kind);

struct MetricSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double ci_low = 0.0; // 95% normal approximation
    double ci_high = 0.0;
    double median = 0.0;
};

MetricSummary summarize(std::vector<double> values);

struct MonteCarloOptions {
    unsigned workers = 0; // 0 = hardware concurrency
    bool keep_traces = false;
};

struct MonteCarloResult {
    std::vector<RunMetrics> runs;
    std::vector<ScenarioTrace> traces; // filled when keep_traces
    // filter name -> metric name -> summary
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, MetricSummary>>>> aggregate;

    const MetricSummary& summary(FilterKind kind, const std::string& metric) const;
};

/// config.monte_carlo_runs independent runs, run i seeded with
/// run_seed(config.noise.seed, i). Results are ordered by run index.
MonteCarloResult run_monte_carlo(const ScenarioConfig& config, const MonteCarloOptions& options = {});

// Flattened scalar metrics of one filter, used for aggregation and reports.
std::vector<std::pair<std::string, std::optional<double>>> metric_values(const FilterMetrics& m);

struct BoundOptions {
    double window = 0.5;           // seconds per MSE window
    double transient = 1.0;        // seconds excluded after the start and after each event
    double ceiling = 1.0;          // loss-of-track level for the windowed MSE
    double growth_tolerance = 1.0; // allowed relative growth of the late-half mean
    double noise_floor = 1e-4;     // absolute slack on squared error
    std::vector<double> events;    // regime changes (fault, attack on/off), seconds
};

struct BoundReport {
    std::vector<double> window_mse; // windows after the initial transient
    double sup_mse = 0.0;           // largest of window_mse
    double trend_start = 0.0;       // start of the span used for the trend test, seconds
    double early_mean = 0.0;        // mean windowed MSE, first half of the trend span
    double late_mean = 0.0;         // mean windowed MSE, second half of the trend span
    bool bounded = false;
    bool non_increasing = false;
};

/// Empirical boundedness check on a squared-error sequence sampled every dt.
///
/// bounded:        every sample after the initial transient is finite and
///                 every window MSE is below ceiling.
/// non_increasing: over the windows following the last event plus the
///                 transient, the second-half mean is at most
///                 (1 + growth_tolerance) * first-half mean + noise_floor.
BoundReport bound_monitor(std::span<const double> error_sq, double dt, const BoundOptions& options = {});
BoundReport bound_monitor(const ScenarioTrace& trace, FilterKind kind, double dt, const BoundOptions& options = {});

/// Fault time and attack window edges that fall inside the horizon.
std::vector<double> regime_events(const ScenarioConfig& config);

struct CalibrationResult {
    double threshold = 0.0;
    double max_d = 0.0;
    std::size_t samples = 0;
    std::size_t runs = 0;
};

/// Runs config.monte_carlo_runs attack-free runs and calibrates the Euclidean
/// threshold from the calibration filter's d values after calibration.skip
/// seconds (full windows only). Throws ConfigError if an attack is configured.
CalibrationResult calibrate_detector(const ScenarioConfig& config, unsigned workers = 0);

} // namespace dse
