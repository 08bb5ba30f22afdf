#pragma once

#include <functional>

#include "dse/linalg.hpp"

namespace dse {

/// Discrete-time nonlinear plant with additive noise:
///   x_k = f(x_{k-1}, u_{k-1}) + w_{k-1},   y_k = h(x_k, u_k) + v_k.
///
/// Only f and h are required. The filters fall back to central finite
/// differences when a Jacobian is absent, and to column-wise f when no batch
/// propagator is supplied.
struct PlantModel {
    using Map = std::function<Vec(const Vec& x, const Vec& u)>;
    using JacobianMap = std::function<Mat(const Vec& x, const Vec& u)>;
    // Propagates every column of `points` through f in place.
    using BatchMap = std::function<void(Mat& points, const Vec& u)>;

    int state_dim = 0;
    int meas_dim = 0;
    Map f;
    Map h;
    JacobianMap jac_f;
    JacobianMap jac_h;
    BatchMap f_batch;

    void propagate_columns(Mat& points, const Vec& u) const;
    Mat measure_columns(const Mat& points, const Vec& u) const;
};

} // namespace dse
