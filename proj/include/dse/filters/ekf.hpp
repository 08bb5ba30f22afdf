#pragma once

#include <utility>

#include "dse/filters/belief.hpp"
#include "dse/plant.hpp"

namespace dse {

/// x- = f(x, u),  P- = F P F^T + Q  with F the state Jacobian at the prior mean.
GaussianBelief ekf_predict(const GaussianBelief& belief, const PlantModel& model, const Vec& u, const Mat& q_cov);

/// K = P- H^T (H P- H^T + R)^-1,  x+ = x- + K (y - h(x-)),  P+ = (I - K H) P-.
std::pair<GaussianBelief, UpdateArtifacts> ekf_update(const GaussianBelief& belief, const PlantModel& model,
                                                      const Vec& u, const Vec& measurement, const Mat& r_cov,
                                                      const UpdateOptions& options = {});

} // namespace dse
