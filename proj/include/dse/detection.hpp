#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "dse/linalg.hpp"

namespace dse {

struct DetectorConfig {
    double alpha = 0.01;
    int dof = 1;
    double chi2_threshold = 6.634896601021214; // chi2 quantile at 1 - alpha for dof 1
    double euclid_threshold = 0.073857114048009986; // calibrated on the nominal scenario
    int euclid_window = 10;

    void validate() const; // throws ConfigError
};

struct DetectorVerdict {
    double t = 0.0;
    double g_chi2 = 0.0;
    double d_euclid = 0.0;
    bool chi2_alarm = false;
    bool euclid_alarm = false;
};

Vec residual(const Vec& measured, const Vec& predicted_meas);

/// g = z^T C^-1 z. Throws SingularityError when C is not positive definite.
double chi2_statistic(const Vec& z, const Mat& innovation_cov);

/// (1 - alpha) quantile of the chi-square distribution with `dof` degrees of freedom.
double chi2_threshold_for(int dof, double alpha);

/// sqrt(sum r_i^2) over a window of residuals.
double euclidean_statistic(std::span<const double> residuals);

/// Sliding window of the most recent scalar residuals (stride 1).
class EuclideanWindow {
  public:
    explicit EuclideanWindow(std::size_t capacity);

    double push(double residual);
    bool full() const { return values_.size() == capacity_; }

  private:
    std::size_t capacity_;
    std::deque<double> values_;
};

/// chi-square + Euclidean detector pair for one filter's innovation stream.
/// Uses the first innovation component for the Euclidean window.
class ResidualDetector {
  public:
    explicit ResidualDetector(DetectorConfig config);

    DetectorVerdict observe(double t, const Vec& innovation, const Mat& innovation_cov);
    const DetectorConfig& config() const { return config_; }

  private:
    DetectorConfig config_;
    EuclideanWindow window_;
};

inline constexpr double kCalibrationPercentile = 99.9;
inline constexpr double kCalibrationSafetyFactor = 1.2;
inline constexpr std::size_t kMinCalibrationRuns = 20;

/// Euclidean threshold from attack-free runs: 1.2 x the 99.9th percentile of
/// every d value, raised just above the largest observed d if necessary so the
/// threshold strictly exceeds all calibration data.
double calibrate_euclid_threshold(const std::vector<std::vector<double>>& attack_free_runs);

/// Linear-interpolated percentile (q in [0, 100]) of unsorted data.
double percentile(std::vector<double> values, double q);

} // namespace dse
