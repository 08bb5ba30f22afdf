#include "dse/filters/estimator.hpp"

#include "dse/errors.hpp"
#include "dse/filters/ckf.hpp"
#include "dse/filters/ekf.hpp"
#include "dse/filters/sckf.hpp"
#include "dse/noise.hpp"

namespace dse {

std::string_view filter_name(FilterKind kind) {
    switch (kind) {
    case FilterKind::ekf:
        return "ekf";
    case FilterKind::ckf:
        return "ckf";
    case FilterKind::sckf:
        return "sckf";
    }
    return "?";
}

std::optional<FilterKind> parse_filter(std::string_view name) {
    for (FilterKind kind : kAllFilters) {
        if (filter_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

namespace {

class FullCovarianceEstimator final : public Estimator {
  public:
    FullCovarianceEstimator(FilterKind kind, const EstimatorSetup& setup)
        : kind_(kind), setup_(setup), belief_(setup.initial) {}

    FilterKind kind() const override { return kind_; }

    void predict(const Vec& u) override {
        belief_ = kind_ == FilterKind::ekf ? ekf_predict(belief_, *setup_.model, u, setup_.q_cov)
                                           : ckf_predict(belief_, *setup_.model, u, setup_.q_cov);
    }

    UpdateArtifacts update(const Vec& u, const Vec& measurement, const GainTransform& gain_transform) override {
        const UpdateOptions options{setup_.form, gain_transform};
        auto [post, art] = kind_ == FilterKind::ekf
                               ? ekf_update(belief_, *setup_.model, u, measurement, setup_.r_cov, options)
                               : ckf_update(belief_, *setup_.model, u, measurement, setup_.r_cov, options);
        belief_ = std::move(post);
        return std::move(art);
    }

    const Vec& mean() const override { return belief_.mean; }
    Mat covariance() const override { return belief_.cov; }

  private:
    FilterKind kind_;
    EstimatorSetup setup_;
    GaussianBelief belief_;
};

class SquareRootEstimator final : public Estimator {
  public:
    explicit SquareRootEstimator(const EstimatorSetup& setup)
        : setup_(setup), belief_(SqrtGaussianBelief::from_belief(setup.initial)), q_sqrt_(psd_factor(setup.q_cov)),
          r_sqrt_(psd_factor(setup.r_cov)) {}

    FilterKind kind() const override { return FilterKind::sckf; }

    void predict(const Vec& u) override { belief_ = sckf_predict(belief_, *setup_.model, u, q_sqrt_); }

    UpdateArtifacts update(const Vec& u, const Vec& measurement, const GainTransform& gain_transform) override {
        auto [post, art] =
            sckf_update(belief_, *setup_.model, u, measurement, r_sqrt_, UpdateOptions{setup_.form, gain_transform});
        belief_ = std::move(post);
        return std::move(art);
    }

    const Vec& mean() const override { return belief_.mean; }
    Mat covariance() const override { return belief_.covariance(); }

  private:
    EstimatorSetup setup_;
    SqrtGaussianBelief belief_;
    Mat q_sqrt_;
    Mat r_sqrt_;
};

} // namespace

std::unique_ptr<Estimator> make_estimator(FilterKind kind, const EstimatorSetup& setup) {
    if (!setup.model) {
        throw ConfigError("make_estimator: missing plant model");
    }
    if (kind == FilterKind::sckf) {
        return std::make_unique<SquareRootEstimator>(setup);
    }
    return std::make_unique<FullCovarianceEstimator>(kind, setup);
}

} // namespace dse
