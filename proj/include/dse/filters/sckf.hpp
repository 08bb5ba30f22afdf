#pragma once

#include <utility>

#include "dse/filters/belief.hpp"
#include "dse/plant.hpp"

namespace dse {

/// Square-root cubature filter. Covariances never leave factored form: every
/// factor update is a tria() of a stacked deviation / noise-factor block.
///
/// q_sqrt and r_sqrt are any factors with Q = S_Q S_Q^T, R = S_R S_R^T.
SqrtGaussianBelief sckf_predict(const SqrtGaussianBelief& belief, const PlantModel& model, const Vec& u,
                                const Mat& q_sqrt);

std::pair<SqrtGaussianBelief, UpdateArtifacts> sckf_update(const SqrtGaussianBelief& belief, const PlantModel& model,
                                                           const Vec& u, const Vec& measurement, const Mat& r_sqrt,
                                                           const UpdateOptions& options = {});

} // namespace dse
