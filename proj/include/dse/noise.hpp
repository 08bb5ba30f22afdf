#pragma once

#include <cstdint>
#include <random>

#include "dse/linalg.hpp"

namespace dse {

struct NoiseSpec {
    Mat q_cov = Mat::Identity(4, 4) * 1e-6;
    Mat r_cov = Mat::Constant(1, 1, 1e-4);
    std::uint64_t seed = 1;
};

// Independent sub-streams derived from one seed.
enum class NoiseStream : std::uint64_t { process = 1, measurement = 2 };

/// Zero-mean Gaussian sampler with a fixed covariance and its own seeded engine.
///
/// The covariance must be symmetric positive semi-definite; a zero matrix
/// yields all-zero draws. Anything else throws ConfigError.
class GaussianSampler {
  public:
    GaussianSampler(const Mat& cov, std::uint64_t seed, NoiseStream stream = NoiseStream::process);

    Vec draw();
    int dim() const { return static_cast<int>(factor_.rows()); }

  private:
    Mat factor_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Symmetric square-root factor F with F * F^T == cov, valid for PSD covariances.
Mat psd_factor(const Mat& cov);

} // namespace dse
