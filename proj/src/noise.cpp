#include "dse/noise.hpp"

#include "dse/errors.hpp"

namespace dse {

Mat psd_factor(const Mat& cov) {
    if (cov.rows() != cov.cols() || cov.rows() == 0) {
        throw ConfigError("noise covariance must be a non-empty square matrix");
    }
    if (!cov.allFinite()) {
        throw ConfigError("noise covariance has non-finite entries");
    }
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ConfigError("noise covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(symmetrize(cov));
    const Vec lambda = eig.eigenvalues();
    if (lambda.minCoeff() < -1e-12 * scale) {
        throw ConfigError("noise covariance is not positive semi-definite");
    }
    const Vec root = lambda.cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

GaussianSampler::GaussianSampler(const Mat& cov, std::uint64_t seed, NoiseStream stream) : factor_(psd_factor(cov)) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    engine_.seed(seq);
}

Vec GaussianSampler::draw() {
    Vec z(factor_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z(i) = normal_(engine_);
    }
    return factor_ * z;
}

} // namespace dse
