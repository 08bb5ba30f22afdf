#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dse/attack.hpp"
#include "dse/detection.hpp"
#include "dse/filters/belief.hpp"
#include "dse/filters/estimator.hpp"
#include "dse/machine_model.hpp"
#include "dse/noise.hpp"

namespace dse {

// Constant T_m and a single E_fd step.
struct InputSchedule {
    double t_m = 0.8;
    double e_fd_initial = 2.11;
    double e_fd_final = 2.32;
    double e_fd_step_time = 0.5;

    InputVector at(double t) const;
};

struct FilterSettings {
    std::vector<FilterKind> selection{FilterKind::ekf, FilterKind::ckf, FilterKind::sckf};
    Mat q_cov = Mat::Identity(4, 4) * 1e-6;
    Mat r_cov = Mat::Constant(1, 1, 1e-4);
    CovarianceForm form = CovarianceForm::simple;
};

// How q_diag values are read: covariance per step, or intensity per second
// of simulated time (per-step covariance = q * dt).
enum class QBasis { per_step, per_second };

struct CalibrationSettings {
    double skip = 1.0; // seconds excluded at the start of each run
    FilterKind filter = FilterKind::ckf;
};

struct ScenarioConfig {
    std::string name = "custom";
    MachineParams machine;
    NoiseSpec noise; // truth process / measurement noise
    QBasis q_basis = QBasis::per_step; // applies to noise.q_cov and filters.q_cov
    FilterSettings filters;
    StateVector x0_true{0.4, 0.0, 0.0, 0.0};
    Vec x0_est = Eigen::Vector4d(0.4, 0.0, 0.0, 0.0);
    Mat p0 = Mat::Identity(4, 4) * 1e-2;
    InputSchedule inputs;
    double dt = 0.01;
    double horizon = 5.0;
    std::optional<ParamFault> fault;
    AttackSpec attack;
    DetectorConfig detector;
    int monte_carlo_runs = 1;
    std::optional<std::pair<double, double>> metrics_interval;
    CalibrationSettings calibration;

    void validate() const; // throws ConfigError
    std::size_t step_count() const; // rows in a trace: horizon / dt + 1
    bool selects(FilterKind kind) const;
    Mat truth_q_step() const;  // per-step process noise covariance of the truth
    Mat filter_q_step() const; // per-step process noise covariance assumed by filters
};

inline constexpr std::uint64_t kSeedStride = 10007;

/// Seed used by Monte-Carlo run `index`.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::size_t index) { return base_seed + index * kSeedStride; }

/// Parses the YAML scenario format. Unknown keys and missing required keys
/// (simulation.dt, simulation.horizon, simulation.seed) throw ConfigError
/// naming the key.
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::string& path);

/// Serializes every field, so parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ScenarioConfig& config);

} // namespace dse
