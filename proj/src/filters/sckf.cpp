#include "dse/filters/sckf.hpp"

#include "dse/errors.hpp"
#include "dse/filters/cubature.hpp"

namespace dse {

SqrtGaussianBelief SqrtGaussianBelief::from_belief(const GaussianBelief& belief) {
    return SqrtGaussianBelief{belief.mean, cholesky_lower(belief.cov)};
}

namespace {

Mat hstack(const Mat& a, const Mat& b) {
    Mat out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

} // namespace

SqrtGaussianBelief sckf_predict(const SqrtGaussianBelief& belief, const PlantModel& model, const Vec& u,
                                const Mat& q_sqrt) {
    const CubatureSet rule = cubature_points(static_cast<int>(belief.mean.size()));
    Mat points = cubature_samples(belief.mean, belief.sqrt_factor, rule);
    model.propagate_columns(points, u);

    SqrtGaussianBelief prior;
    prior.mean = points.rowwise().mean();
    prior.sqrt_factor = tria(hstack(centered_deviations(points, prior.mean), q_sqrt));
    if (!prior.sqrt_factor.allFinite()) {
        throw NumericalError("sckf_predict: non-finite square-root factor");
    }
    return prior;
}

std::pair<SqrtGaussianBelief, UpdateArtifacts> sckf_update(const SqrtGaussianBelief& belief, const PlantModel& model,
                                                           const Vec& u, const Vec& measurement, const Mat& r_sqrt,
                                                           const UpdateOptions& options) {
    const CubatureSet rule = cubature_points(static_cast<int>(belief.mean.size()));
    const Mat points = cubature_samples(belief.mean, belief.sqrt_factor, rule);
    const Mat meas_points = model.measure_columns(points, u);

    UpdateArtifacts art;
    art.predicted_meas = meas_points.rowwise().mean();
    art.innovation = measurement - art.predicted_meas;
    const Mat x_dev = centered_deviations(points, belief.mean);
    const Mat z_dev = centered_deviations(meas_points, art.predicted_meas);
    const Mat s_zz = tria(hstack(z_dev, r_sqrt));
    art.innovation_cov = s_zz * s_zz.transpose();
    art.cross_cov = x_dev * z_dev.transpose();

    const double diag_floor = 1e-300;
    if (!s_zz.allFinite() || s_zz.diagonal().cwiseAbs().minCoeff() <= diag_floor) {
        throw SingularityError("sckf_update: innovation square-root factor is singular");
    }
    // W = (Pxz / Szz^T) / Szz, i.e. W^T = Szz^-T (Szz^-1 Pxz^T).
    const Mat half = s_zz.triangularView<Eigen::Lower>().solve(art.cross_cov.transpose());
    art.gain = s_zz.transpose().triangularView<Eigen::Upper>().solve(half).transpose();
    art.applied_gain = options.gain_transform ? options.gain_transform(art.gain) : art.gain;
    const Mat& gain = art.applied_gain;

    SqrtGaussianBelief post;
    post.mean = belief.mean + gain * art.innovation;
    post.sqrt_factor = tria(hstack(x_dev - gain * z_dev, gain * r_sqrt));
    return {std::move(post), std::move(art)};
}

} // namespace dse
