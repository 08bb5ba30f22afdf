#include "dse/linalg.hpp"

#include "dse/errors.hpp"

namespace dse {

bool all_finite(const Mat& m) { return m.allFinite(); }

Mat cholesky_lower(const Mat& p) {
    if (!p.allFinite()) {
        throw NumericalError("cholesky_lower: non-finite covariance");
    }
    const Mat sym = symmetrize(p);
    Eigen::LLT<Mat> llt(sym);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    const auto n = static_cast<double>(sym.rows());
    const double jitter = 1e-9 * sym.trace() / n;
    if (jitter > 0.0) {
        Mat bumped = sym;
        bumped.diagonal().array() += jitter;
        llt.compute(bumped);
        if (llt.info() == Eigen::Success) {
            return llt.matrixL();
        }
    }
    throw SingularityError("cholesky_lower: covariance is not positive definite");
}

Mat tria(const Mat& m) {
    const Eigen::Index rows = m.rows();
    if (rows > m.cols()) {
        throw ConfigError("tria: matrix must have at least as many columns as rows");
    }
    Eigen::HouseholderQR<Mat> qr(m.transpose());
    Mat lower = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
    for (Eigen::Index j = 0; j < rows; ++j) {
        if (lower(j, j) < 0.0) {
            lower.col(j) = -lower.col(j);
        }
    }
    return lower;
}

} // namespace dse
