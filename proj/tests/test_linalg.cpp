#include <gtest/gtest.h>

#include <random>

#include "dse/errors.hpp"
#include "dse/linalg.hpp"
#include "oracles.hpp"

using namespace dse;

namespace {
Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = g(rng);
        }
    }
    return m;
}
} // namespace

TEST(Tria, ReproducesProductOnRandomShapes) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 6;
        const int m = n + trial % 9;
        const Mat a = random_matrix(n, m, rng);
        const Mat l = tria(a);
        ASSERT_EQ(l.rows(), n);
        ASSERT_EQ(l.cols(), n);
        const Mat aat = a * a.transpose();
        EXPECT_LT((l * l.transpose() - aat).norm(), 1e-12 * (1.0 + aat.norm()));
        for (int i = 0; i < n; ++i) {
            EXPECT_GE(l(i, i), 0.0);
            for (int j = i + 1; j < n; ++j) {
                EXPECT_EQ(l(i, j), 0.0);
            }
        }
    }
}

TEST(Tria, SquareLowerTriangularInputIsFixedUpToSigns) {
    Mat l(2, 2);
    l << 2.0, 0.0, -1.0, 3.0;
    const Mat out = tria(l);
    EXPECT_LT((out - l).norm(), 1e-14);
    Mat flipped = l;
    flipped.col(0) *= -1.0;
    EXPECT_LT((tria(flipped) - l).norm(), 1e-14);
}

TEST(Tria, MatchesCholeskyOfProduct) {
    std::mt19937_64 rng(22);
    const Mat a = random_matrix(4, 9, rng);
    const Mat chol = Eigen::LLT<Mat>(a * a.transpose()).matrixL();
    EXPECT_LT((tria(a) - chol).norm(), 1e-12);
}

TEST(Tria, ZeroRowsGiveZeroFactor) {
    Mat a = Mat::Zero(3, 5);
    a.row(0) << 1, 2, 3, 4, 5;
    const Mat l = tria(a);
    EXPECT_LT((l * l.transpose() - a * a.transpose()).norm(), 1e-12);
    EXPECT_TRUE(all_finite(l));
}

TEST(Cholesky, FactorsSpdMatrices) {
    std::mt19937_64 rng(23);
    for (int n = 1; n <= 6; ++n) {
        const Mat p = oracle::random_spd(n, rng);
        const Mat l = cholesky_lower(p);
        EXPECT_LT((l * l.transpose() - p).norm(), 1e-12);
    }
}

TEST(Cholesky, JitterRescuesSemidefinite) {
    Mat p = Mat::Zero(3, 3);
    p(0, 0) = 1.0;
    p(1, 1) = 2.0; // rank deficient
    const Mat l = cholesky_lower(p);
    EXPECT_TRUE(all_finite(l));
    EXPECT_LT((l * l.transpose() - p).norm(), 1e-8);
}

TEST(Cholesky, IndefiniteThrows) {
    Mat p = Mat::Identity(2, 2);
    p(1, 1) = -1.0;
    EXPECT_THROW(cholesky_lower(p), SingularityError);
}

TEST(Linalg, SymmetrizeAndFiniteness) {
    Mat a(2, 2);
    a << 1, 2, 4, 3;
    const Mat s = symmetrize(a);
    EXPECT_EQ(s(0, 1), 3.0);
    EXPECT_EQ(s(1, 0), 3.0);
    EXPECT_TRUE(all_finite(a));
    a(1, 1) = std::numeric_limits<double>::infinity();
    EXPECT_FALSE(all_finite(a));
}

TEST(Tria, PaddedIdentityIsIdentity) {
    Mat m = Mat::Zero(3, 7);
    m.leftCols(3) = Mat::Identity(3, 3);
    EXPECT_LT((tria(m) - Mat::Identity(3, 3)).norm(), 1e-15);
}
