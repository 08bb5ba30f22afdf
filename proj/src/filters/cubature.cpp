#include "dse/filters/cubature.hpp"

#include <cmath>

#include "dse/errors.hpp"

namespace dse {

CubatureSet cubature_points(int n) {
    if (n < 1) {
        throw ConfigError("cubature_points: dimension must be >= 1");
    }
    const double radius = std::sqrt(static_cast<double>(n));
    CubatureSet rule;
    rule.points = Mat::Zero(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        rule.points(i, i) = radius;
        rule.points(i, n + i) = -radius;
    }
    rule.weight = 1.0 / (2.0 * n);
    return rule;
}

Mat cubature_samples(const Vec& mean, const Mat& sqrt_factor, const CubatureSet& rule) {
    return (sqrt_factor * rule.points).colwise() + mean;
}

Mat centered_deviations(const Mat& points, const Vec& mean) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(points.cols()));
    return (points.colwise() - mean) * scale;
}

} // namespace dse
