#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dse/filters/belief.hpp"
#include "dse/linalg.hpp"

namespace dse {

enum class AttackKind { none, random, dos, replay, fdi };

std::string_view attack_name(AttackKind kind);
std::optional<AttackKind> parse_attack(std::string_view name);

enum class FdiMode {
    additive,       // y^a = y + eta
    cancel_replace, // a = -y + eta, so y^a = eta
};

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    double t_start = 0.0;
    double t_end = 0.0;
    double amplitude = 0.0;       // sine amplitude (random) or injected bias eta (fdi)
    double frequency = 60.0;      // Hz, random attack
    double delay = 0.3;           // seconds, replay attack
    double amplitude_bound = 1.0; // delta~ (random) / eta~ (fdi)
    Vec gain_mask;                // per-state gain scale (fdi); empty = gain untouched
    FdiMode fdi_mode = FdiMode::additive;

    bool active_at(double t) const;
    void validate() const; // throws ConfigError
};

/// Scenario defaults for `kind`: random 0.1 sin(2 pi 60 t) and fdi +0.05 with
/// gain mask [0.05, 0, 0, 0] over [0, horizon]; dos over [0.2, 1.8]; replay
/// with delay 0.3 over [1, 3]. Windows are clipped to the horizon.
AttackSpec default_attack(AttackKind kind, double horizon);

struct MeasurementSample {
    double t;
    double value;
};

// Clean measurements seen so far, in increasing time order.
using MeasurementHistory = std::vector<MeasurementSample>;

struct MeasurementRecord {
    double t = 0.0;
    double clean = 0.0;
    double attacked = 0.0;
    bool attack_active = false;
};

double random_attack(double clean, double t, const AttackSpec& spec);

/// Holds the last clean sample taken strictly before t_start for the whole
/// window. `history` must end with the current sample at time t.
double dos_attack(const MeasurementHistory& history, double t, const AttackSpec& spec);

/// Returns the clean sample recorded at t - delay (nearest earlier sample).
/// If the history does not reach back that far the earliest sample is used.
double replay_attack(const MeasurementHistory& history, double t, const AttackSpec& spec);

double fdi_attack(double clean, double t, const AttackSpec& spec);

/// diag(mask) * gain. The mask length must equal the gain's row count.
Mat fdi_gain_mask(const Mat& gain, const AttackSpec& spec);

/// Owns the clean-measurement history for one run and applies one AttackSpec.
class AttackInjector {
  public:
    explicit AttackInjector(AttackSpec spec);

    MeasurementRecord inject(double t, double clean);

    // Gain manipulation for the filter update at time t, empty when inactive.
    GainTransform gain_transform(double t) const;

    const AttackSpec& spec() const { return spec_; }
    bool replay_underrun() const { return replay_underrun_; }

  private:
    AttackSpec spec_;
    MeasurementHistory history_;
    bool replay_underrun_ = false;
};

} // namespace dse
