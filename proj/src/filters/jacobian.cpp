#include "dse/filters/jacobian.hpp"

#include <algorithm>
#include <cmath>

#include "dse/errors.hpp"

namespace dse {

Mat jacobian_fd(const PlantModel::Map& map, const Vec& x, const Vec& u) {
    const Vec y0 = map(x, u);
    Mat jac(y0.size(), x.size());
    Vec probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = 1e-6 * std::max(1.0, std::abs(x(i)));
        probe(i) = x(i) + step;
        const Vec up = map(probe, u);
        probe(i) = x(i) - step;
        const Vec down = map(probe, u);
        probe(i) = x(i);
        jac.col(i) = (up - down) / (2.0 * step);
    }
    if (!jac.allFinite()) {
        throw NumericalError("jacobian_fd: non-finite derivative");
    }
    return jac;
}

} // namespace dse
