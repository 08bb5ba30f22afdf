#include "dse/scenario/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "dse/errors.hpp"

namespace dse {

const FilterMetrics& RunMetrics::of(FilterKind kind) const {
    for (const auto& f : filters) {
        if (f.kind == kind) {
            return f;
        }
    }
    throw ConfigError("metrics: filter '" + std::string(filter_name(kind)) + "' was not run");
}

std::pair<double, double> default_metrics_interval(const ScenarioConfig& config) {
    if (config.metrics_interval) {
        return *config.metrics_interval;
    }
    if (config.attack.kind != AttackKind::none) {
        return {config.attack.t_start, std::min(config.attack.t_end, config.horizon)};
    }
    if (config.fault) {
        return {config.fault->fault_time, config.horizon};
    }
    return {0.0, config.horizon};
}

namespace {

template <typename E>
[[noreturn]] void rethrow_at_step(const E& e, std::size_t step) {
    throw E("step " + std::to_string(step) + ": " + e.what());
}

struct FilterLane {
    std::unique_ptr<Estimator> estimator;
    ResidualDetector detector;
    double min_eig = std::numeric_limits<double>::infinity();
};

double min_eigenvalue(const Mat& cov) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(cov, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    const std::size_t steps = config.step_count();
    auto model = std::make_shared<const PlantModel>(make_smib_plant(config.machine, config.dt));

    std::vector<FilterLane> lanes;
    for (FilterKind kind : config.filters.selection) {
        EstimatorSetup setup{model, GaussianBelief{config.x0_est, config.p0}, config.filter_q_step(),
                             config.filters.r_cov, config.filters.form};
        lanes.push_back(FilterLane{make_estimator(kind, setup), ResidualDetector(config.detector)});
    }

    GaussianSampler process_noise(config.truth_q_step(), config.noise.seed, NoiseStream::process);
    GaussianSampler meas_noise(config.noise.r_cov, config.noise.seed, NoiseStream::measurement);
    AttackInjector injector(config.attack);

    ScenarioResult result;
    result.trace.filters = config.filters.selection;
    result.trace.rows.reserve(steps);

    StateVector x = config.x0_true;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        try {
            const InputVector u = config.inputs.at(t);
            if (k > 0) {
                const double t_prev = static_cast<double>(k - 1) * config.dt;
                const MachineParams p_prev =
                    config.fault ? apply_fault(config.machine, *config.fault, t_prev) : config.machine;
                x = step_discrete(x, config.inputs.at(t_prev), p_prev, config.dt) + StateVector(process_noise.draw());
            }
            const MachineParams p_now = config.fault ? apply_fault(config.machine, *config.fault, t) : config.machine;
            const double clean = measure(x, p_now) + meas_noise.draw()(0);
            const MeasurementRecord rec = injector.inject(t, clean);
            const GainTransform gain_transform = injector.gain_transform(t);

            TraceRow row;
            row.t = t;
            row.x_true = x;
            row.y_clean = rec.clean;
            row.y_attacked = rec.attacked;
            const Vec y = Vec::Constant(1, rec.attacked);
            const Vec u_now = u.to_vec();
            for (FilterLane& lane : lanes) {
                if (k > 0) {
                    lane.estimator->predict(config.inputs.at(t - config.dt).to_vec());
                }
                const UpdateArtifacts art = lane.estimator->update(u_now, y, gain_transform);
                const DetectorVerdict v = lane.detector.observe(t, art.innovation, art.innovation_cov);
                const Mat cov = lane.estimator->covariance();
                lane.min_eig = std::min(lane.min_eig, min_eigenvalue(cov));
                FilterStep step;
                step.estimate = StateVector(lane.estimator->mean());
                if (!step.estimate.allFinite()) {
                    throw NumericalError("non-finite estimate from " + std::string(filter_name(lane.estimator->kind())));
                }
                step.g = v.g_chi2;
                step.d = v.d_euclid;
                step.chi2_alarm = v.chi2_alarm;
                step.euclid_alarm = v.euclid_alarm;
                row.filters.push_back(step);
            }
            result.trace.rows.push_back(std::move(row));
        } catch (const NumericalError& e) {
            rethrow_at_step(e, k);
        } catch (const SingularityError& e) {
            rethrow_at_step(e, k);
        }
    }

    std::vector<double> min_eigs;
    for (const FilterLane& lane : lanes) {
        min_eigs.push_back(lane.min_eig);
    }
    result.metrics = compute_metrics(config, result.trace, min_eigs);
    return result;
}

std::vector<double> squared_errors(const ScenarioTrace& trace, FilterKind kind) {
    const std::size_t col = trace.column_of(kind);
    std::vector<double> out;
    out.reserve(trace.rows.size());
    for (const TraceRow& row : trace.rows) {
        out.push_back((row.x_true - row.filters[col].estimate).squaredNorm());
    }
    return out;
}

RunMetrics compute_metrics(const ScenarioConfig& config, const ScenarioTrace& trace,
                           std::span<const double> min_cov_eigenvalues) {
    constexpr double slack = 1e-9;
    const auto [t0, t1] = default_metrics_interval(config);
    const bool attacked = config.attack.kind != AttackKind::none;

    RunMetrics metrics;
    metrics.seed = config.noise.seed;
    metrics.interval_start = t0;
    metrics.interval_end = t1;

    for (std::size_t f = 0; f < trace.filters.size(); ++f) {
        FilterMetrics m;
        m.kind = trace.filters[f];
        m.min_cov_eigenvalue = f < min_cov_eigenvalues.size() ? min_cov_eigenvalues[f] : 0.0;

        Eigen::Array4d sq_sum = Eigen::Array4d::Zero();
        double norm_sum = 0.0;
        std::size_t n_interval = 0;
        std::size_t n_clean = 0;
        std::size_t clean_alarms = 0;
        double clean_g = 0.0;
        std::size_t n_attack = 0;
        std::size_t chi2_in_attack = 0;
        std::size_t euclid_in_attack = 0;

        for (const TraceRow& row : trace.rows) {
            const FilterStep& s = row.filters[f];
            const StateVector err = row.x_true - s.estimate;
            if (row.t >= t0 - slack && row.t <= t1 + slack) {
                sq_sum += err.array().square();
                norm_sum += err.norm();
                ++n_interval;
            }
            if (attacked && config.attack.active_at(row.t)) {
                ++n_attack;
                chi2_in_attack += s.chi2_alarm ? 1 : 0;
                euclid_in_attack += s.euclid_alarm ? 1 : 0;
                if (s.chi2_alarm && !m.chi2_latency) {
                    m.chi2_latency = std::max(0.0, row.t - config.attack.t_start);
                }
                if (s.euclid_alarm && !m.euclid_latency) {
                    m.euclid_latency = std::max(0.0, row.t - config.attack.t_start);
                }
            } else if (!attacked || row.t < config.attack.t_start - slack) {
                ++n_clean;
                clean_alarms += s.chi2_alarm ? 1 : 0;
                clean_g += s.g;
            }
        }
        if (n_interval > 0) {
            const Eigen::Array4d rmse = (sq_sum / static_cast<double>(n_interval)).sqrt();
            m.rmse = {rmse(0), rmse(1), rmse(2), rmse(3)};
            m.mean_error_norm = norm_sum / static_cast<double>(n_interval);
        }
        if (n_clean > 0) {
            m.chi2_false_alarm_rate = static_cast<double>(clean_alarms) / static_cast<double>(n_clean);
            m.mean_g = clean_g / static_cast<double>(n_clean);
        }
        if (n_attack > 0) {
            m.chi2_duty = static_cast<double>(chi2_in_attack) / static_cast<double>(n_attack);
            m.euclid_duty = static_cast<double>(euclid_in_attack) / static_cast<double>(n_attack);
        }
        metrics.filters.push_back(m);
    }
    return metrics;
}

std::vector<std::pair<std::string, std::optional<double>>> metric_values(const FilterMetrics& m) {
    return {{"rmse_x1", m.rmse[0]},
            {"rmse_x2", m.rmse[1]},
            {"rmse_x3", m.rmse[2]},
            {"rmse_x4", m.rmse[3]},
            {"mean_error_norm", m.mean_error_norm},
            {"chi2_false_alarm_rate", m.chi2_false_alarm_rate},
            {"mean_g", m.mean_g},
            {"chi2_latency", m.chi2_latency},
            {"euclid_latency", m.euclid_latency},
            {"chi2_duty", m.chi2_duty},
            {"euclid_duty", m.euclid_duty},
            {"min_cov_eigenvalue", m.min_cov_eigenvalue}};
}

MetricSummary summarize(std::vector<double> values) {
    MetricSummary s;
    s.n = values.size();
    if (values.empty()) {
        return s;
    }
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    const double half_width = 1.959963984540054 * s.stddev / std::sqrt(n);
    s.ci_low = s.mean - half_width;
    s.ci_high = s.mean + half_width;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return s;
}

const MetricSummary& MonteCarloResult::summary(FilterKind kind, const std::string& metric) const {
    for (const auto& [filter, metrics] : aggregate) {
        if (filter != filter_name(kind)) {
            continue;
        }
        for (const auto& [name, summary] : metrics) {
            if (name == metric) {
                return summary;
            }
        }
    }
    throw ConfigError("monte carlo: no summary for " + std::string(filter_name(kind)) + "." + metric);
}

namespace {

// Runs job(i) for i in [0, count) across `workers` threads; first exception wins.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job job) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

MonteCarloResult run_monte_carlo(const ScenarioConfig& config, const MonteCarloOptions& options) {
    config.validate();
    const auto runs = static_cast<std::size_t>(config.monte_carlo_runs);
    MonteCarloResult result;
    result.runs.resize(runs);
    if (options.keep_traces) {
        result.traces.resize(runs);
    }
    parallel_for(runs, options.workers, [&](std::size_t i) {
        ScenarioConfig run_config = config;
        run_config.noise.seed = run_seed(config.noise.seed, i);
        ScenarioResult r = run_scenario(run_config);
        result.runs[i] = std::move(r.metrics);
        if (options.keep_traces) {
            result.traces[i] = std::move(r.trace);
        }
    });

    for (FilterKind kind : config.filters.selection) {
        std::vector<std::pair<std::string, std::vector<double>>> columns;
        for (const RunMetrics& run : result.runs) {
            const auto values = metric_values(run.of(kind));
            if (columns.empty()) {
                for (const auto& [name, value] : values) {
                    columns.emplace_back(name, std::vector<double>{});
                }
            }
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (values[j].second) {
                    columns[j].second.push_back(*values[j].second);
                }
            }
        }
        std::vector<std::pair<std::string, MetricSummary>> summaries;
        for (auto& [name, values] : columns) {
            summaries.emplace_back(name, summarize(std::move(values)));
        }
        result.aggregate.emplace_back(std::string(filter_name(kind)), std::move(summaries));
    }
    return result;
}

BoundReport bound_monitor(std::span<const double> error_sq, double dt, const BoundOptions& options) {
    BoundReport report;
    const auto per_window = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.window / dt)));
    const auto to_index = [&](double t) {
        return std::min(error_sq.size(), static_cast<std::size_t>(std::llround(std::max(0.0, t) / dt)));
    };
    const std::size_t start = to_index(options.transient);

    // Full windows only; a trailing partial window is dropped.
    for (std::size_t w = start; w + per_window <= error_sq.size(); w += per_window) {
        const auto first = error_sq.begin() + static_cast<std::ptrdiff_t>(w);
        report.window_mse.push_back(std::accumulate(first, first + static_cast<std::ptrdiff_t>(per_window), 0.0) /
                                    static_cast<double>(per_window));
    }
    // Every sample after the transient counts, including a trailing partial window.
    const bool finite = std::all_of(error_sq.begin() + static_cast<std::ptrdiff_t>(start), error_sq.end(),
                                    [](double v) { return std::isfinite(v); });
    if (!finite) {
        report.sup_mse = std::numeric_limits<double>::infinity();
        return report;
    }
    for (double v : report.window_mse) {
        report.sup_mse = std::max(report.sup_mse, v);
    }
    report.bounded = report.sup_mse < options.ceiling;

    double trend_start = options.transient;
    for (double e : options.events) {
        trend_start = std::max(trend_start, e + options.transient);
    }
    report.trend_start = trend_start;
    std::vector<double> trend;
    for (std::size_t i = 0; i < report.window_mse.size(); ++i) {
        if (start + i * per_window >= to_index(trend_start)) {
            trend.push_back(report.window_mse[i]);
        }
    }
    if (trend.size() < 2) {
        report.non_increasing = true;
        return report;
    }
    const auto mid = trend.begin() + static_cast<std::ptrdiff_t>(trend.size() / 2);
    report.early_mean = std::accumulate(trend.begin(), mid, 0.0) / static_cast<double>(mid - trend.begin());
    report.late_mean = std::accumulate(mid, trend.end(), 0.0) / static_cast<double>(trend.end() - mid);
    report.non_increasing =
        report.late_mean <= (1.0 + options.growth_tolerance) * report.early_mean + options.noise_floor;
    return report;
}

BoundReport bound_monitor(const ScenarioTrace& trace, FilterKind kind, double dt, const BoundOptions& options) {
    const auto err = squared_errors(trace, kind);
    return bound_monitor(err, dt, options);
}

std::vector<double> regime_events(const ScenarioConfig& config) {
    std::vector<double> events;
    const auto add = [&](double t) {
        if (t > 0.0 && t < config.horizon) {
            events.push_back(t);
        }
    };
    if (config.fault) {
        add(config.fault->fault_time);
    }
    if (config.attack.kind != AttackKind::none) {
        add(config.attack.t_start);
        add(config.attack.t_end);
    }
    std::sort(events.begin(), events.end());
    return events;
}

CalibrationResult calibrate_detector(const ScenarioConfig& config, unsigned workers) {
    if (config.attack.kind != AttackKind::none) {
        throw ConfigError("calibrate: configuration has an attack enabled; calibration needs attack-free runs");
    }
    if (static_cast<std::size_t>(config.monte_carlo_runs) < kMinCalibrationRuns) {
        throw ConfigError("calibrate: need simulation.monte_carlo_runs >= " + std::to_string(kMinCalibrationRuns));
    }
    ScenarioConfig cal = config;
    if (!cal.selects(cal.calibration.filter)) {
        cal.filters.selection.push_back(cal.calibration.filter);
        std::sort(cal.filters.selection.begin(), cal.filters.selection.end());
    }
    const MonteCarloResult mc = run_monte_carlo(cal, MonteCarloOptions{workers, true});

    const auto first_full = static_cast<std::size_t>(std::max(0, cal.detector.euclid_window - 1));
    std::vector<std::vector<double>> d_runs;
    for (const ScenarioTrace& trace : mc.traces) {
        const std::size_t col = trace.column_of(cal.calibration.filter);
        std::vector<double> d;
        for (std::size_t k = first_full; k < trace.rows.size(); ++k) {
            if (trace.rows[k].t >= cal.calibration.skip - 1e-9) {
                d.push_back(trace.rows[k].filters[col].d);
            }
        }
        d_runs.push_back(std::move(d));
    }
    CalibrationResult out;
    out.threshold = calibrate_euclid_threshold(d_runs);
    out.runs = d_runs.size();
    for (const auto& run : d_runs) {
        out.samples += run.size();
        for (double v : run) {
            out.max_d = std::max(out.max_d, v);
        }
    }
    return out;
}

} // namespace dse
