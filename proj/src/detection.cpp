#include "dse/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "dse/errors.hpp"

namespace dse {

void DetectorConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("detector: alpha must lie in (0, 1)");
    }
    if (dof < 1) {
        throw ConfigError("detector: dof must be >= 1");
    }
    if (!(chi2_threshold > 0.0)) {
        throw ConfigError("detector: chi2_threshold must be > 0");
    }
    if (!(euclid_threshold > 0.0)) {
        throw ConfigError("detector: euclid_threshold must be > 0");
    }
    if (euclid_window < 1) {
        throw ConfigError("detector: euclid_window must be >= 1");
    }
}

Vec residual(const Vec& measured, const Vec& predicted_meas) { return measured - predicted_meas; }

double chi2_statistic(const Vec& z, const Mat& innovation_cov) {
    Eigen::LLT<Mat> llt(innovation_cov);
    if (llt.info() != Eigen::Success || !innovation_cov.allFinite()) {
        throw SingularityError("chi2_statistic: innovation covariance is not positive definite");
    }
    // ||L^-1 z||^2 is non-negative by construction.
    return llt.matrixL().solve(z).squaredNorm();
}

double chi2_threshold_for(int dof, double alpha) {
    if (dof < 1 || !(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("chi2_threshold_for: need dof >= 1 and 0 < alpha < 1");
    }
    const boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

double euclidean_statistic(std::span<const double> residuals) {
    const double sum_sq =
        std::accumulate(residuals.begin(), residuals.end(), 0.0, [](double acc, double r) { return acc + r * r; });
    return std::sqrt(sum_sq);
}

EuclideanWindow::EuclideanWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        throw ConfigError("EuclideanWindow: capacity must be >= 1");
    }
}

double EuclideanWindow::push(double residual) {
    values_.push_back(residual);
    if (values_.size() > capacity_) {
        values_.pop_front();
    }
    const std::vector<double> snapshot(values_.begin(), values_.end());
    return euclidean_statistic(snapshot);
}

ResidualDetector::ResidualDetector(DetectorConfig config)
    : config_(config), window_(static_cast<std::size_t>(std::max(config.euclid_window, 1))) {
    config_.validate();
}

DetectorVerdict ResidualDetector::observe(double t, const Vec& innovation, const Mat& innovation_cov) {
    DetectorVerdict v;
    v.t = t;
    v.g_chi2 = chi2_statistic(innovation, innovation_cov);
    v.d_euclid = window_.push(innovation(0));
    v.chi2_alarm = v.g_chi2 > config_.chi2_threshold;
    v.euclid_alarm = v.d_euclid > config_.euclid_threshold;
    return v;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw ConfigError("percentile: empty sample");
    }
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double calibrate_euclid_threshold(const std::vector<std::vector<double>>& attack_free_runs) {
    if (attack_free_runs.size() < kMinCalibrationRuns) {
        throw ConfigError("calibrate_euclid_threshold: need at least " + std::to_string(kMinCalibrationRuns) +
                          " attack-free runs, got " + std::to_string(attack_free_runs.size()));
    }
    std::vector<double> pooled;
    for (const auto& run : attack_free_runs) {
        pooled.insert(pooled.end(), run.begin(), run.end());
    }
    if (pooled.empty()) {
        throw ConfigError("calibrate_euclid_threshold: calibration runs contain no samples");
    }
    const double max_d = *std::max_element(pooled.begin(), pooled.end());
    const double scaled = kCalibrationSafetyFactor * percentile(pooled, kCalibrationPercentile);
    if (scaled > max_d) {
        return scaled;
    }
    return std::nextafter(max_d, std::numeric_limits<double>::infinity());
}

} // namespace dse
