#include "dse/plant.hpp"

namespace dse {

void PlantModel::propagate_columns(Mat& points, const Vec& u) const {
    if (f_batch) {
        f_batch(points, u);
        return;
    }
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        points.col(i) = f(points.col(i), u);
    }
}

Mat PlantModel::measure_columns(const Mat& points, const Vec& u) const {
    Mat out(meas_dim, points.cols());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        out.col(i) = h(points.col(i), u);
    }
    return out;
}

} // namespace dse
