#include "dse/attack.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "dse/errors.hpp"

namespace dse {

namespace {
// Sample times are multiples of dt; comparisons get this much slack.
constexpr double kTimeSlack = 1e-9;
} // namespace

std::string_view attack_name(AttackKind kind) {
    switch (kind) {
    case AttackKind::none:
        return "none";
    case AttackKind::random:
        return "random";
    case AttackKind::dos:
        return "dos";
    case AttackKind::replay:
        return "replay";
    case AttackKind::fdi:
        return "fdi";
    }
    return "?";
}

std::optional<AttackKind> parse_attack(std::string_view name) {
    for (AttackKind kind :
         {AttackKind::none, AttackKind::random, AttackKind::dos, AttackKind::replay, AttackKind::fdi}) {
        if (attack_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

bool AttackSpec::active_at(double t) const {
    return kind != AttackKind::none && t >= t_start - kTimeSlack && t <= t_end + kTimeSlack;
}

void AttackSpec::validate() const {
    if (kind == AttackKind::none) {
        return;
    }
    if (!(t_start <= t_end)) {
        throw ConfigError("attack: window start must not exceed window end");
    }
    if (kind == AttackKind::replay && !(delay > 0.0)) {
        throw ConfigError("attack: replay delay must be > 0");
    }
    if ((kind == AttackKind::random || kind == AttackKind::fdi) && std::abs(amplitude) > amplitude_bound) {
        throw ConfigError("attack: |amplitude| exceeds amplitude_bound");
    }
    if (kind == AttackKind::random && !(frequency >= 0.0)) {
        throw ConfigError("attack: frequency must be >= 0");
    }
}

double random_attack(double clean, double t, const AttackSpec& spec) {
    if (!spec.active_at(t)) {
        return clean;
    }
    return clean + spec.amplitude * std::sin(2.0 * std::numbers::pi * spec.frequency * t);
}

double dos_attack(const MeasurementHistory& history, double t, const AttackSpec& spec) {
    if (history.empty()) {
        throw ConfigError("dos_attack: empty measurement history");
    }
    if (!spec.active_at(t)) {
        return history.back().value;
    }
    // Last sample strictly before the window opened.
    const auto it = std::find_if(history.rbegin(), history.rend(), [&](const MeasurementSample& s) {
        return s.t < spec.t_start - kTimeSlack;
    });
    if (it == history.rend()) {
        throw ConfigError("dos_attack: window starts before any measurement was taken");
    }
    return it->value;
}

double replay_attack(const MeasurementHistory& history, double t, const AttackSpec& spec) {
    if (history.empty()) {
        throw ConfigError("replay_attack: empty measurement history");
    }
    if (!spec.active_at(t) || spec.delay <= 0.0) {
        return history.back().value;
    }
    const double target = t - spec.delay + kTimeSlack;
    const auto it = std::upper_bound(history.begin(), history.end(), target,
                                     [](double value, const MeasurementSample& s) { return value < s.t; });
    if (it == history.begin()) {
        return history.front().value;
    }
    return std::prev(it)->value;
}

double fdi_attack(double clean, double t, const AttackSpec& spec) {
    if (!spec.active_at(t)) {
        return clean;
    }
    return spec.fdi_mode == FdiMode::additive ? clean + spec.amplitude : spec.amplitude;
}

Mat fdi_gain_mask(const Mat& gain, const AttackSpec& spec) {
    if (spec.gain_mask.size() != gain.rows()) {
        throw ConfigError("fdi_gain_mask: mask length " + std::to_string(spec.gain_mask.size()) +
                          " does not match state dimension " + std::to_string(gain.rows()));
    }
    return spec.gain_mask.asDiagonal() * gain;
}

AttackSpec default_attack(AttackKind kind, double horizon) {
    AttackSpec spec;
    spec.kind = kind;
    spec.t_end = horizon;
    switch (kind) {
    case AttackKind::none:
        spec.t_end = 0.0;
        break;
    case AttackKind::random:
        spec.amplitude = 0.1;
        spec.amplitude_bound = 0.1;
        break;
    case AttackKind::dos:
        spec.t_start = 0.2;
        spec.t_end = 1.8;
        break;
    case AttackKind::replay:
        spec.t_start = 1.0;
        spec.t_end = 3.0;
        break;
    case AttackKind::fdi:
        spec.amplitude = 0.05;
        spec.amplitude_bound = 0.05;
        spec.gain_mask = Eigen::Vector4d(0.05, 0.0, 0.0, 0.0);
        break;
    }
    spec.t_start = std::min(spec.t_start, horizon);
    spec.t_end = std::min(spec.t_end, horizon);
    return spec;
}

AttackInjector::AttackInjector(AttackSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

MeasurementRecord AttackInjector::inject(double t, double clean) {
    history_.push_back({t, clean});
    MeasurementRecord rec{t, clean, clean, spec_.active_at(t)};
    if (!rec.attack_active) {
        return rec;
    }
    switch (spec_.kind) {
    case AttackKind::none:
        break;
    case AttackKind::random:
        rec.attacked = random_attack(clean, t, spec_);
        break;
    case AttackKind::dos:
        rec.attacked = dos_attack(history_, t, spec_);
        break;
    case AttackKind::replay:
        if (!replay_underrun_ && t - spec_.delay < history_.front().t - kTimeSlack) {
            replay_underrun_ = true;
            std::clog << "warning: replay history underrun at t=" << t << ", using earliest sample\n";
        }
        rec.attacked = replay_attack(history_, t, spec_);
        break;
    case AttackKind::fdi:
        rec.attacked = fdi_attack(clean, t, spec_);
        break;
    }
    return rec;
}

GainTransform AttackInjector::gain_transform(double t) const {
    if (spec_.kind != AttackKind::fdi || spec_.gain_mask.size() == 0 || !spec_.active_at(t)) {
        return {};
    }
    return [spec = spec_](const Mat& gain) { return fdi_gain_mask(gain, spec); };
}

} // namespace dse
