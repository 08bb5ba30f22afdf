#pragma once

#include "dse/linalg.hpp"

namespace dse {

/// Third-degree spherical-radial cubature rule for N(0, I_n):
/// m = 2n equally weighted points at +-sqrt(n) e_i.
struct CubatureSet {
    Mat points; // n x 2n, columns are the unit-space points xi_i
    double weight = 0.0;

    int dim() const { return static_cast<int>(points.rows()); }
    int count() const { return static_cast<int>(points.cols()); }
};

CubatureSet cubature_points(int n);

/// Points mapped to N(mean, S S^T): X_i = S xi_i + mean.
Mat cubature_samples(const Vec& mean, const Mat& sqrt_factor, const CubatureSet& rule);

/// Weighted, centred deviation matrix (1/sqrt(m)) [X_1 - mean, ..., X_m - mean].
Mat centered_deviations(const Mat& points, const Vec& mean);

} // namespace dse
