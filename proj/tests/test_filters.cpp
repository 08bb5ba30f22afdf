#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "dse/errors.hpp"
#include "dse/filters/ckf.hpp"
#include "dse/filters/cubature.hpp"
#include "dse/filters/ekf.hpp"
#include "dse/filters/estimator.hpp"
#include "dse/filters/jacobian.hpp"
#include "dse/filters/sckf.hpp"
#include "dse/machine_model.hpp"
#include "oracles.hpp"

using namespace dse;

namespace {

PlantModel linear_plant(const Mat& a, const Mat& c) {
    PlantModel m;
    m.state_dim = static_cast<int>(a.rows());
    m.meas_dim = static_cast<int>(c.rows());
    m.f = [a](const Vec& x, const Vec&) -> Vec { return a * x; };
    m.h = [c](const Vec& x, const Vec&) -> Vec { return c * x; };
    return m;
}

Vec random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = g(rng);
    }
    return v;
}

double rel(const Mat& a, const Mat& b) { return (a - b).norm() / (1.0 + b.norm()); }

const Vec kNoInput = Vec::Zero(2);

} // namespace

TEST(Filters, ScalarHandComputedUpdate) {
    // P = 1, H = 1, R = 1 gives K = 0.5; y = 1 from x = 0 moves the mean to 0.5.
    const PlantModel m = linear_plant(Mat::Identity(1, 1), Mat::Identity(1, 1));
    const GaussianBelief prior{Vec::Zero(1), Mat::Identity(1, 1)};
    const Vec y = Vec::Ones(1);
    const Mat r = Mat::Identity(1, 1);
    for (const auto& [post, art] : {ekf_update(prior, m, kNoInput, y, r), ckf_update(prior, m, kNoInput, y, r)}) {
        EXPECT_NEAR(art.gain(0, 0), 0.5, 1e-12);
        EXPECT_NEAR(post.mean(0), 0.5, 1e-12);
        EXPECT_NEAR(post.cov(0, 0), 0.5, 1e-12);
        EXPECT_NEAR(art.innovation_cov(0, 0), 2.0, 1e-12);
    }
    const auto [spost, sart] = sckf_update(SqrtGaussianBelief::from_belief(prior), m, kNoInput, y, r);
    EXPECT_NEAR(sart.gain(0, 0), 0.5, 1e-12);
    EXPECT_NEAR(spost.mean(0), 0.5, 1e-12);
    EXPECT_NEAR(spost.covariance()(0, 0), 0.5, 1e-12);
}

TEST(Filters, LinearSystemAllFiltersMatchClosedFormKalman) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 4;
        const Mat a = oracle::random_stable(n, rng);
        Mat c(1, n);
        c.row(0) = random_vec(n, rng).transpose();
        const Mat q = oracle::random_spd(n, rng, 0.01) * 0.1;
        const Mat r = Mat::Identity(1, 1) * 0.5;
        const auto model = std::make_shared<const PlantModel>(linear_plant(a, c));
        const GaussianBelief init{random_vec(n, rng), oracle::random_spd(n, rng)};

        oracle::LinearKf kf{a, c, q, r, init.mean, init.cov};
        std::vector<std::unique_ptr<Estimator>> filters;
        for (FilterKind kind : kAllFilters) {
            filters.push_back(make_estimator(kind, EstimatorSetup{model, init, q, r}));
        }
        Vec x = init.mean;
        for (int k = 0; k < 100; ++k) {
            x = a * x + random_vec(n, rng, 0.3);
            const Vec y = c * x + random_vec(1, rng, 0.7);
            kf.predict();
            kf.update(y);
            for (auto& f : filters) {
                f->predict(kNoInput);
                f->update(kNoInput, y);
                ASSERT_LT(rel(f->mean(), kf.x), 1e-8) << filter_name(f->kind()) << " step " << k;
                ASSERT_LT(rel(f->covariance(), kf.P), 1e-8) << filter_name(f->kind()) << " step " << k;
            }
        }
    }
}

TEST(Filters, CubatureRuleIsExactForDegreeThree) {
    for (int n = 1; n <= 6; ++n) {
        const CubatureSet rule = cubature_points(n);
        ASSERT_EQ(rule.count(), 2 * n);
        EXPECT_DOUBLE_EQ(rule.weight, 1.0 / (2 * n));
        std::vector<int> powers(n, 0);
        // All exponent vectors with total degree <= 3.
        const std::function<void(int, int)> visit = [&](int i, int budget) {
            if (i == n) {
                double sum = 0.0;
                for (int j = 0; j < rule.count(); ++j) {
                    double term = 1.0;
                    for (int d = 0; d < n; ++d) {
                        term *= std::pow(rule.points(d, j), powers[d]);
                    }
                    sum += rule.weight * term;
                }
                EXPECT_NEAR(sum, oracle::gaussian_moment(powers), 1e-10) << "n=" << n;
                return;
            }
            for (int k = 0; k <= budget; ++k) {
                powers[i] = k;
                visit(i + 1, budget - k);
            }
            powers[i] = 0;
        };
        visit(0, 3);
    }
}

TEST(Filters, CubatureSamplesReproduceMeanAndCovariance) {
    std::mt19937_64 rng(32);
    for (int n = 1; n <= 6; ++n) {
        const Vec mu = random_vec(n, rng);
        const Mat p = oracle::random_spd(n, rng);
        const Mat s = cholesky_lower(p);
        const Mat pts = cubature_samples(mu, s, cubature_points(n));
        const Vec mean = pts.rowwise().mean();
        const Mat dev = centered_deviations(pts, mean);
        EXPECT_LT((mean - mu).norm(), 1e-12);
        EXPECT_LT((dev * dev.transpose() - p).norm(), 1e-12);
    }
}

TEST(Filters, CkfPredictMatchesMonteCarloForQuadraticMap) {
    // f(x) = A x + 0.1 [x0^2, x0 x1]: the predicted mean is a degree-2
    // expectation, exact under the cubature rule.
    Mat a(2, 2);
    a << 0.9, 0.1, -0.2, 0.8;
    PlantModel m;
    m.state_dim = 2;
    m.meas_dim = 1;
    m.f = [a](const Vec& x, const Vec&) -> Vec {
        Vec out = a * x;
        out[0] += 0.1 * x[0] * x[0];
        out[1] += 0.1 * x[0] * x[1];
        return out;
    };
    m.h = [](const Vec& x, const Vec&) -> Vec { return x.head(1); };
    Mat p(2, 2);
    p << 0.5, 0.1, 0.1, 0.3;
    const GaussianBelief b{Eigen::Vector2d(0.3, -0.2), p};
    const GaussianBelief prior = ckf_predict(b, m, kNoInput, Mat::Zero(2, 2));

    Eigen::Vector2d closed = a * b.mean;
    closed[0] += 0.1 * (b.mean[0] * b.mean[0] + p(0, 0));
    closed[1] += 0.1 * (b.mean[0] * b.mean[1] + p(0, 1));
    EXPECT_LT((prior.mean - closed).norm(), 1e-12);

    std::mt19937_64 rng(33);
    const Mat l = cholesky_lower(p);
    const int samples = 1000000;
    Vec acc = Vec::Zero(2);
    for (int i = 0; i < samples; ++i) {
        acc += m.f(b.mean + l * random_vec(2, rng), kNoInput);
    }
    acc /= samples;
    // Five standard errors of the sample mean (|f| spread is below 1).
    EXPECT_LT((prior.mean - acc).cwiseAbs().maxCoeff(), 5.0 / std::sqrt(samples));
}

TEST(Filters, SquareRootMatchesFullCovarianceOnSmibModel) {
    std::mt19937_64 rng(34);
    const PlantModel model = make_smib_plant(MachineParams{}, 0.01);
    const Vec u = InputVector{0.8, 2.32}.to_vec();
    std::uniform_real_distribution<double> ang(0.2, 1.2), volt(0.0, 1.2);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec mean = Eigen::Vector4d(ang(rng), 1e-3 * random_vec(1, rng)[0], volt(rng), -0.3 * volt(rng));
        const Mat p = oracle::random_spd(4, rng, 1e-3) * 1e-3;
        const Mat q = oracle::random_spd(4, rng, 1e-4) * 1e-5;
        const Mat r = Mat::Constant(1, 1, 1e-4);
        const GaussianBelief full{mean, p};

        const GaussianBelief prior = ckf_predict(full, model, u, q);
        const SqrtGaussianBelief sprior = sckf_predict(SqrtGaussianBelief::from_belief(full), model, u, cholesky_lower(q));
        ASSERT_LT(rel(sprior.mean, prior.mean), 1e-9);
        ASSERT_LT(rel(sprior.covariance(), prior.cov), 1e-9);

        const Vec y = model.h(prior.mean, u) + random_vec(1, rng, 0.01);
        const auto [post, art] = ckf_update(prior, model, u, y, r);
        const auto [spost, sart] = sckf_update(sprior, model, u, y, cholesky_lower(r));
        ASSERT_LT(rel(spost.mean, post.mean), 1e-9);
        ASSERT_LT(rel(spost.covariance(), post.cov), 1e-9);
        ASSERT_LT(rel(sart.gain, art.gain), 1e-9);
        ASSERT_LT(rel(sart.innovation_cov, art.innovation_cov), 1e-9);
    }
}

TEST(Filters, GainSatisfiesNormalEquations) {
    std::mt19937_64 rng(35);
    const PlantModel model = make_smib_plant(MachineParams{}, 0.01);
    const Vec u = InputVector{}.to_vec();
    const GaussianBelief b{Eigen::Vector4d(0.6, 0.0, 0.9, -0.2), oracle::random_spd(4, rng, 1e-3) * 1e-2};
    const Vec y = Vec::Constant(1, 0.81);
    const Mat r = Mat::Constant(1, 1, 1e-4);
    const auto check = [](const UpdateArtifacts& art) {
        EXPECT_LT((art.gain * art.innovation_cov - art.cross_cov).norm(), 1e-12 * (1.0 + art.cross_cov.norm()));
        EXPECT_EQ(art.gain, art.applied_gain);
    };
    check(ekf_update(b, model, u, y, r).second);
    check(ckf_update(b, model, u, y, r).second);
    check(sckf_update(SqrtGaussianBelief::from_belief(b), model, u, y, cholesky_lower(r)).second);
}

TEST(Filters, JosephAndSimpleFormsAgreeForOptimalGain) {
    std::mt19937_64 rng(36);
    const PlantModel model = make_smib_plant(MachineParams{}, 0.01);
    const Vec u = InputVector{}.to_vec();
    const GaussianBelief b{Eigen::Vector4d(0.6, 0.0, 0.9, -0.2), oracle::random_spd(4, rng, 1e-3) * 1e-2};
    const Vec y = Vec::Constant(1, 0.83);
    const Mat r = Mat::Constant(1, 1, 1e-4);
    UpdateOptions joseph;
    joseph.form = CovarianceForm::joseph;
    EXPECT_LT(rel(ekf_update(b, model, u, y, r, joseph).first.cov, ekf_update(b, model, u, y, r).first.cov), 1e-9);
    EXPECT_LT(rel(ckf_update(b, model, u, y, r, joseph).first.cov, ckf_update(b, model, u, y, r).first.cov), 1e-9);
}

TEST(Filters, TransformedGainKeepsCovariancePositive) {
    std::mt19937_64 rng(37);
    const PlantModel model = make_smib_plant(MachineParams{}, 0.01);
    const Vec u = InputVector{}.to_vec();
    GaussianBelief b{Eigen::Vector4d(0.6, 0.0, 0.9, -0.2), oracle::random_spd(4, rng, 1e-3) * 1e-2};
    UpdateOptions opts;
    const Eigen::Vector4d mask(0.05, 0.0, 0.0, 0.0);
    opts.gain_transform = [mask](const Mat& g) -> Mat { return mask.asDiagonal() * g; };
    EXPECT_EQ(opts.effective_form(), CovarianceForm::joseph);
    for (int k = 0; k < 50; ++k) {
        b = ckf_predict(b, model, u, Mat::Identity(4, 4) * 1e-8);
        auto [post, art] = ckf_update(b, model, u, Vec::Constant(1, 0.85), Mat::Constant(1, 1, 1e-4), opts);
        EXPECT_LT((art.applied_gain - mask.asDiagonal() * art.gain).norm(), 1e-15);
        b = post;
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(b.cov).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Filters, ZeroMeasurementJacobianLeavesPriorUnchanged) {
    PlantModel m = linear_plant(Mat::Identity(2, 2), Mat::Zero(1, 2));
    const GaussianBelief b{Eigen::Vector2d(1.0, -1.0), Mat::Identity(2, 2) * 0.3};
    const Mat r = Mat::Identity(1, 1) * 0.2;
    const Vec y = Vec::Constant(1, 5.0);
    for (const auto& [post, art] : {ekf_update(b, m, kNoInput, y, r), ckf_update(b, m, kNoInput, y, r)}) {
        EXPECT_LT(art.gain.norm(), 1e-15);
        EXPECT_NEAR(art.innovation_cov(0, 0), 0.2, 1e-15);
        EXPECT_LT((post.mean - b.mean).norm(), 1e-15);
        EXPECT_LT((post.cov - b.cov).norm(), 1e-15);
    }
    const auto [spost, sart] = sckf_update(SqrtGaussianBelief::from_belief(b), m, kNoInput, y, cholesky_lower(r));
    EXPECT_LT((spost.covariance() - b.cov).norm(), 1e-14);
}

TEST(Filters, ZeroInnovationKeepsMeanAndShrinksCovariance) {
    std::mt19937_64 rng(38);
    const PlantModel model = make_smib_plant(MachineParams{}, 0.01);
    const Vec u = InputVector{}.to_vec();
    const GaussianBelief b{Eigen::Vector4d(0.5, 0.0, 1.0, -0.1), oracle::random_spd(4, rng, 1e-3) * 1e-3};
    const Mat r = Mat::Constant(1, 1, 1e-4);
    const auto [post, art] = ekf_update(b, model, u, model.h(b.mean, u), r);
    EXPECT_LT((post.mean - b.mean).norm(), 1e-15);
    EXPECT_LE(post.cov.trace(), b.cov.trace());
    const auto [cpost, cart] = ckf_update(b, model, u, Vec::Constant(1, 0.0), r);
    const auto [cpost2, cart2] = ckf_update(b, model, u, cart.predicted_meas, r);
    EXPECT_LT((cpost2.mean - b.mean).norm(), 1e-15);
    EXPECT_LT((cpost2.cov - cpost.cov).norm(), 1e-15); // covariance is data-independent
}

TEST(Filters, IdentityDynamicsWithoutNoisePreserveBelief) {
    std::mt19937_64 rng(39);
    const PlantModel m = linear_plant(Mat::Identity(3, 3), Mat::Identity(1, 3));
    const GaussianBelief b{random_vec(3, rng), oracle::random_spd(3, rng)};
    // The EKF differentiates f numerically, which costs about eps / step of accuracy.
    const GaussianBelief e = ekf_predict(b, m, kNoInput, Mat::Zero(3, 3));
    EXPECT_LT((e.mean - b.mean).norm(), 1e-12);
    EXPECT_LT((e.cov - b.cov).norm(), 1e-8);
    const GaussianBelief c = ckf_predict(b, m, kNoInput, Mat::Zero(3, 3));
    EXPECT_LT((c.mean - b.mean).norm(), 1e-12);
    EXPECT_LT((c.cov - b.cov).norm(), 1e-12);
    const SqrtGaussianBelief s =
        sckf_predict(SqrtGaussianBelief::from_belief(b), m, kNoInput, Mat::Zero(3, 3));
    EXPECT_LT((s.covariance() - b.cov).norm(), 1e-12);
}

TEST(Filters, EkfFiniteDifferenceFallbackMatchesAnalyticJacobian) {
    std::mt19937_64 rng(40);
    const Mat a = oracle::random_stable(3, rng);
    PlantModel with = linear_plant(a, Mat::Identity(1, 3));
    with.jac_f = [a](const Vec&, const Vec&) -> Mat { return a; };
    const PlantModel without = linear_plant(a, Mat::Identity(1, 3));
    const GaussianBelief b{random_vec(3, rng), oracle::random_spd(3, rng)};
    const Mat q = Mat::Identity(3, 3) * 0.01;
    EXPECT_LT(rel(ekf_predict(b, without, kNoInput, q).cov, ekf_predict(b, with, kNoInput, q).cov), 1e-8);
}

TEST(Filters, IndefiniteInnovationCovarianceThrows) {
    const PlantModel m = linear_plant(Mat::Identity(1, 1), Mat::Identity(1, 1));
    const GaussianBelief b{Vec::Zero(1), Mat::Identity(1, 1)};
    EXPECT_THROW(ekf_update(b, m, kNoInput, Vec::Ones(1), Mat::Constant(1, 1, -2.0)), SingularityError);
}

TEST(Filters, EstimatorNamesRoundTrip) {
    for (FilterKind kind : kAllFilters) {
        EXPECT_EQ(parse_filter(filter_name(kind)), kind);
    }
    EXPECT_FALSE(parse_filter("ukf").has_value());
}

TEST(Filters, EkfPredictLinearAndIdentityCases) {
    std::mt19937_64 rng(41);
    const Mat a = oracle::random_stable(4, rng);
    PlantModel lin = linear_plant(a, Mat::Identity(1, 4));
    lin.jac_f = [a](const Vec&, const Vec&) -> Mat { return a; };
    const GaussianBelief b{random_vec(4, rng), oracle::random_spd(4, rng)};
    const GaussianBelief p1 = ekf_predict(b, lin, kNoInput, Mat::Zero(4, 4));
    EXPECT_LT((p1.cov - a * b.cov * a.transpose()).norm(), 1e-14);

    PlantModel id = linear_plant(Mat::Identity(4, 4), Mat::Identity(1, 4));
    id.jac_f = [](const Vec&, const Vec&) -> Mat { return Mat::Identity(4, 4); };
    const Mat q = oracle::random_spd(4, rng);
    EXPECT_LT((ekf_predict(b, id, kNoInput, q).cov - (b.cov + q)).norm(), 1e-14);
    EXPECT_LT((ckf_predict(b, id, kNoInput, q).cov - (b.cov + q)).norm(), 1e-12);
}

TEST(Filters, EkfPredictAtSmibEquilibrium) {
    const MachineParams p;
    const oracle::Smib op{p.d_damping, p.j_inertia, p.t_do_prime, p.t_qo_prime, p.x_d, p.x_q,
                          p.x_d_prime, p.x_q_prime, p.v_t,         p.omega_0};
    const Vec xe = oracle::smib_equilibrium(oracle::Vec4(0.82, 0.0, 0.8, -0.4), 0.8, 2.29, op);
    const PlantModel model = make_smib_plant(p, 0.01);
    const Vec u = InputVector{0.8, 2.29}.to_vec();
    const Mat p0 = Mat::Identity(4, 4) * 1e-12;
    const Mat q = Mat::Identity(4, 4) * 1e-6;
    const GaussianBelief prior = ekf_predict(GaussianBelief{xe, p0}, model, u, q);
    EXPECT_LT((prior.mean - xe).norm(), 1e-8);
    EXPECT_LT((prior.cov - q).norm(), 1e-9);
}

TEST(Filters, CubaturePointSets) {
    const CubatureSet one = cubature_points(1);
    ASSERT_EQ(one.count(), 2);
    EXPECT_EQ(one.points(0, 0) * one.points(0, 1), -1.0);
    EXPECT_EQ(std::abs(one.points(0, 0)), 1.0);

    const CubatureSet four = cubature_points(4);
    ASSERT_EQ(four.count(), 8);
    for (int j = 0; j < 8; ++j) {
        EXPECT_EQ(four.points.col(j).cwiseAbs().sum(), 2.0);
        EXPECT_EQ(four.points.col(j).cwiseAbs().maxCoeff(), 2.0);
    }
    EXPECT_LT(four.points.rowwise().sum().norm(), 1e-15);
    EXPECT_LT((four.points * four.points.transpose() / 8.0 - Mat::Identity(4, 4)).norm(), 1e-15);
}

TEST(Filters, CkfMatchesEkfOnLinearMaps) {
    std::mt19937_64 rng(42);
    const Mat a = oracle::random_stable(4, rng);
    Mat c(1, 4);
    c.row(0) = random_vec(4, rng).transpose();
    const PlantModel m = linear_plant(a, c);
    const GaussianBelief b{random_vec(4, rng), oracle::random_spd(4, rng)};
    const Mat q = oracle::random_spd(4, rng, 0.01);
    const GaussianBelief ep = ekf_predict(b, m, kNoInput, q);
    const GaussianBelief cp = ckf_predict(b, m, kNoInput, q);
    EXPECT_LT(rel(cp.mean, ep.mean), 1e-10);
    EXPECT_LT(rel(cp.cov, ep.cov), 1e-9); // the EKF's Jacobian is a finite difference here

    const Vec y = Vec::Constant(1, 0.4);
    const Mat r = Mat::Constant(1, 1, 0.3);
    const auto [eu, eart] = ekf_update(b, m, kNoInput, y, r);
    const auto [cu, cart] = ckf_update(b, m, kNoInput, y, r);
    EXPECT_LT(rel(cu.mean, eu.mean), 1e-10);
    EXPECT_LT(rel(cu.cov, eu.cov), 1e-10);
    EXPECT_LT(rel(cart.gain, eart.gain), 1e-10);
}

TEST(Filters, CkfPredictFromSmibEquilibriumMatchesMonteCarlo) {
    const MachineParams p;
    const oracle::Smib op{p.d_damping, p.j_inertia, p.t_do_prime, p.t_qo_prime, p.x_d, p.x_q,
                          p.x_d_prime, p.x_q_prime, p.v_t,         p.omega_0};
    const InputVector u{0.8, 2.29};
    const Vec xe = oracle::smib_equilibrium(oracle::Vec4(0.82, 0.0, 0.8, -0.4), 0.8, 2.29, op);
    const PlantModel model = make_smib_plant(p, 0.01);
    const Mat p0 = Mat::Identity(4, 4) * 1e-2;
    const GaussianBelief prior = ckf_predict(GaussianBelief{xe, p0}, model, u.to_vec(), Mat::Zero(4, 4));

    std::mt19937_64 rng(43);
    std::normal_distribution<double> g;
    const int samples = 1000000;
    Vec sum = Vec::Zero(4), sum_sq = Vec::Zero(4);
    for (int i = 0; i < samples; ++i) {
        const StateVector x0(xe[0] + 0.1 * g(rng), xe[1] + 0.1 * g(rng), xe[2] + 0.1 * g(rng), xe[3] + 0.1 * g(rng));
        const StateVector x1 = step_discrete(x0, u, p, 0.01);
        sum += x1;
        sum_sq += x1.cwiseProduct(x1);
    }
    const Vec mean = sum / samples;
    const Vec var = sum_sq / samples - mean.cwiseProduct(mean);
    for (int i = 0; i < 4; ++i) {
        const double se = std::sqrt(var[i] / samples);
        EXPECT_LT(std::abs(prior.mean[i] - mean[i]), 3.0 * se) << "state " << i << " se " << se;
    }
}

TEST(Filters, SquareRootIdentityAndDiagonalPropagation) {
    const PlantModel id = linear_plant(Mat::Identity(3, 3), Mat::Identity(1, 3));
    std::mt19937_64 rng(44);
    const GaussianBelief b{random_vec(3, rng), oracle::random_spd(3, rng)};
    const SqrtGaussianBelief s = SqrtGaussianBelief::from_belief(b);
    EXPECT_LT((sckf_predict(s, id, kNoInput, Mat::Zero(3, 3)).sqrt_factor - s.sqrt_factor).norm(), 1e-12);

    const Eigen::Vector3d d(0.5, -2.0, 1.5), sd(0.3, 0.1, 2.0), qd(0.2, 0.4, 0.0);
    const PlantModel diag = linear_plant(d.asDiagonal(), Mat::Identity(1, 3));
    const SqrtGaussianBelief sb{Vec::Zero(3), Mat(sd.asDiagonal())};
    const Mat out = sckf_predict(sb, diag, kNoInput, Mat(qd.asDiagonal())).sqrt_factor;
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(out(i, i), std::sqrt(d[i] * d[i] * sd[i] * sd[i] + qd[i] * qd[i]), 1e-14);
    }
    EXPECT_LT((out - Mat(out.diagonal().asDiagonal())).norm(), 1e-14);
}

TEST(Filters, FiniteDifferenceJacobianSimpleMaps) {
    std::mt19937_64 rng(45);
    const Mat a = Mat::Random(3, 4);
    const PlantModel::Map lin = [a](const Vec& x, const Vec&) -> Vec { return a * x; };
    EXPECT_LT((jacobian_fd(lin, random_vec(4, rng), kNoInput) - a).cwiseAbs().maxCoeff(), 1e-8);
    const PlantModel::Map constant = [](const Vec&, const Vec&) -> Vec { return Eigen::Vector2d(1.0, -3.0); };
    EXPECT_EQ(jacobian_fd(constant, random_vec(4, rng), kNoInput), Mat::Zero(2, 4));
}
