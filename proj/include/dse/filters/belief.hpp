#pragma once

#include <functional>

#include "dse/linalg.hpp"

namespace dse {

// Mean and full covariance, as carried by the EKF and CKF.
struct GaussianBelief {
    Vec mean;
    Mat cov;
};

// Mean and lower-triangular factor S with cov = S * S^T, as carried by the SCKF.
struct SqrtGaussianBelief {
    Vec mean;
    Mat sqrt_factor;

    Mat covariance() const { return sqrt_factor * sqrt_factor.transpose(); }

    // Cholesky of the full covariance (with the usual jitter retry).
    static SqrtGaussianBelief from_belief(const GaussianBelief& belief);
};

/// Quantities produced by a measurement update, consumed by the detectors.
///
/// `gain` is always the filter's own gain, cross_cov * innovation_cov^-1.
/// `applied_gain` is what actually corrected the state; it differs only when a
/// gain transform (the FDI gain manipulation) was active.
struct UpdateArtifacts {
    Vec predicted_meas;
    Vec innovation;
    Mat innovation_cov;
    Mat cross_cov;
    Mat gain;
    Mat applied_gain;
};

enum class CovarianceForm {
    simple, // P+ = (I - K H) P-  /  P+ = P- - W Pzz W^T
    joseph, // valid for any gain, keeps P+ symmetric PSD
};

using GainTransform = std::function<Mat(const Mat& gain)>;

/// The simple form assumes the optimal gain. When gain_transform is set the
/// update switches to the joseph form, which stays a valid covariance for the
/// transformed gain.
struct UpdateOptions {
    CovarianceForm form = CovarianceForm::simple;
    GainTransform gain_transform;

    CovarianceForm effective_form() const { return gain_transform ? CovarianceForm::joseph : form; }
};

} // namespace dse
