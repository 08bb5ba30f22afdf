#pragma once

#include <Eigen/Dense>

namespace dse {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Lower Cholesky factor of a symmetric matrix.
///
/// On failure the factorization is retried once with 1e-9 * trace(P)/n added
/// to the diagonal; a second failure throws SingularityError.
Mat cholesky_lower(const Mat& p);

/// Lower-triangular L with L * L^T == M * M^T and a non-negative diagonal.
///
/// Computed from a Householder QR of M^T: M^T = Q R, so M M^T = R^T R and
/// L = R^T (with rows of R sign-flipped to make the diagonal non-negative).
/// Requires rows(M) <= cols(M).
Mat tria(const Mat& m);

// Symmetric part of a square matrix.
inline Mat symmetrize(const Mat& p) { return 0.5 * (p + p.transpose()); }

bool all_finite(const Mat& m);

} // namespace dse
