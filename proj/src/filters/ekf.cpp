#include "dse/filters/ekf.hpp"

#include "dse/errors.hpp"
#include "dse/filters/jacobian.hpp"

namespace dse {

namespace {

Mat state_jacobian(const PlantModel& model, const Vec& x, const Vec& u) {
    return model.jac_f ? model.jac_f(x, u) : jacobian_fd(model.f, x, u);
}

Mat measurement_jacobian(const PlantModel& model, const Vec& x, const Vec& u) {
    return model.jac_h ? model.jac_h(x, u) : jacobian_fd(model.h, x, u);
}

} // namespace

GaussianBelief ekf_predict(const GaussianBelief& belief, const PlantModel& model, const Vec& u, const Mat& q_cov) {
    const Mat jac = state_jacobian(model, belief.mean, u);
    if (!jac.allFinite()) {
        throw NumericalError("ekf_predict: non-finite state Jacobian");
    }
    GaussianBelief prior;
    prior.mean = model.f(belief.mean, u);
    prior.cov = symmetrize(jac * belief.cov * jac.transpose() + q_cov);
    return prior;
}

std::pair<GaussianBelief, UpdateArtifacts> ekf_update(const GaussianBelief& belief, const PlantModel& model,
                                                      const Vec& u, const Vec& measurement, const Mat& r_cov,
                                                      const UpdateOptions& options) {
    const Mat h_jac = measurement_jacobian(model, belief.mean, u);

    UpdateArtifacts art;
    art.predicted_meas = model.h(belief.mean, u);
    art.innovation = measurement - art.predicted_meas;
    art.cross_cov = belief.cov * h_jac.transpose();
    art.innovation_cov = symmetrize(h_jac * art.cross_cov + r_cov);

    Eigen::LLT<Mat> llt(art.innovation_cov);
    if (llt.info() != Eigen::Success || !art.innovation_cov.allFinite()) {
        throw SingularityError("ekf_update: innovation covariance is not invertible");
    }
    art.gain = llt.solve(art.cross_cov.transpose()).transpose();
    art.applied_gain = options.gain_transform ? options.gain_transform(art.gain) : art.gain;
    const Mat& gain = art.applied_gain;

    GaussianBelief post;
    post.mean = belief.mean + gain * art.innovation;
    const Mat i_kh = Mat::Identity(belief.cov.rows(), belief.cov.cols()) - gain * h_jac;
    if (options.effective_form() == CovarianceForm::joseph) {
        post.cov = symmetrize(i_kh * belief.cov * i_kh.transpose() + gain * r_cov * gain.transpose());
    } else {
        post.cov = symmetrize(i_kh * belief.cov);
    }
    return {std::move(post), std::move(art)};
}

} // namespace dse
