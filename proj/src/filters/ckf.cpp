#include "dse/filters/ckf.hpp"

#include "dse/errors.hpp"
#include "dse/filters/cubature.hpp"

namespace dse {

GaussianBelief ckf_predict(const GaussianBelief& belief, const PlantModel& model, const Vec& u, const Mat& q_cov) {
    const CubatureSet rule = cubature_points(static_cast<int>(belief.mean.size()));
    const Mat sqrt_factor = cholesky_lower(belief.cov);
    Mat points = cubature_samples(belief.mean, sqrt_factor, rule);
    model.propagate_columns(points, u);

    GaussianBelief prior;
    prior.mean = points.rowwise().mean();
    // Centred form of (1/m) sum X X^T - x x^T; identical algebraically, no cancellation.
    const Mat dev = centered_deviations(points, prior.mean);
    prior.cov = symmetrize(dev * dev.transpose() + q_cov);
    if (!prior.cov.allFinite()) {
        throw NumericalError("ckf_predict: non-finite predicted covariance");
    }
    return prior;
}

std::pair<GaussianBelief, UpdateArtifacts> ckf_update(const GaussianBelief& belief, const PlantModel& model,
                                                      const Vec& u, const Vec& measurement, const Mat& r_cov,
                                                      const UpdateOptions& options) {
    const CubatureSet rule = cubature_points(static_cast<int>(belief.mean.size()));
    const Mat sqrt_factor = cholesky_lower(belief.cov);
    const Mat points = cubature_samples(belief.mean, sqrt_factor, rule);
    const Mat meas_points = model.measure_columns(points, u);

    UpdateArtifacts art;
    art.predicted_meas = meas_points.rowwise().mean();
    art.innovation = measurement - art.predicted_meas;
    const Mat x_dev = centered_deviations(points, belief.mean);
    const Mat z_dev = centered_deviations(meas_points, art.predicted_meas);
    art.innovation_cov = symmetrize(z_dev * z_dev.transpose() + r_cov);
    art.cross_cov = x_dev * z_dev.transpose();

    Eigen::LLT<Mat> llt(art.innovation_cov);
    if (llt.info() != Eigen::Success || !art.innovation_cov.allFinite()) {
        throw SingularityError("ckf_update: innovation covariance is not invertible");
    }
    art.gain = llt.solve(art.cross_cov.transpose()).transpose();
    art.applied_gain = options.gain_transform ? options.gain_transform(art.gain) : art.gain;
    const Mat& gain = art.applied_gain;

    GaussianBelief post;
    post.mean = belief.mean + gain * art.innovation;
    if (options.effective_form() == CovarianceForm::joseph) {
        const Mat k_pxz = gain * art.cross_cov.transpose();
        post.cov = symmetrize(belief.cov - k_pxz - k_pxz.transpose() +
                              gain * art.innovation_cov * gain.transpose());
    } else {
        post.cov = symmetrize(belief.cov - gain * art.innovation_cov * gain.transpose());
    }
    return {std::move(post), std::move(art)};
}

} // namespace dse
