#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string_view>

#include "dse/filters/belief.hpp"
#include "dse/plant.hpp"

namespace dse {

enum class FilterKind { ekf, ckf, sckf };

inline constexpr std::array<FilterKind, 3> kAllFilters{FilterKind::ekf, FilterKind::ckf, FilterKind::sckf};

std::string_view filter_name(FilterKind kind);
std::optional<FilterKind> parse_filter(std::string_view name);

/// Stateful wrapper running one filter in a predict/update loop.
class Estimator {
  public:
    virtual ~Estimator() = default;

    virtual FilterKind kind() const = 0;
    virtual void predict(const Vec& u) = 0;
    virtual UpdateArtifacts update(const Vec& u, const Vec& measurement, const GainTransform& gain_transform = {}) = 0;
    virtual const Vec& mean() const = 0;
    virtual Mat covariance() const = 0;
};

struct EstimatorSetup {
    std::shared_ptr<const PlantModel> model;
    GaussianBelief initial;
    Mat q_cov;
    Mat r_cov;
    CovarianceForm form = CovarianceForm::simple;
};

std::unique_ptr<Estimator> make_estimator(FilterKind kind, const EstimatorSetup& setup);

} // namespace dse
