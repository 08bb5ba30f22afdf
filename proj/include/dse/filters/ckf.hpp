#pragma once

#include <utility>

#include "dse/filters/belief.hpp"
#include "dse/plant.hpp"

namespace dse {

GaussianBelief ckf_predict(const GaussianBelief& belief, const PlantModel& model, const Vec& u, const Mat& q_cov);

std::pair<GaussianBelief, UpdateArtifacts> ckf_update(const GaussianBelief& belief, const PlantModel& model,
                                                      const Vec& u, const Vec& measurement, const Mat& r_cov,
                                                      const UpdateOptions& options = {});

} // namespace dse
