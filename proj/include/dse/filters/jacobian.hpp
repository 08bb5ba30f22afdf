#pragma once

#include "dse/plant.hpp"

namespace dse {

// Central differences with step 1e-6 * max(1, |x_i|). Throws NumericalError on
// non-finite output.
Mat jacobian_fd(const PlantModel::Map& map, const Vec& x, const Vec& u);

} // namespace dse
