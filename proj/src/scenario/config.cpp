#include "dse/scenario/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dse/errors.hpp"

namespace dse {

InputVector InputSchedule::at(double t) const {
    return InputVector{t_m, t + 1e-9 >= e_fd_step_time ? e_fd_final : e_fd_initial};
}

std::size_t ScenarioConfig::step_count() const {
    return static_cast<std::size_t>(std::llround(horizon / dt)) + 1;
}

bool ScenarioConfig::selects(FilterKind kind) const {
    return std::find(filters.selection.begin(), filters.selection.end(), kind) != filters.selection.end();
}

Mat ScenarioConfig::truth_q_step() const {
    return q_basis == QBasis::per_second ? Mat(noise.q_cov * dt) : noise.q_cov;
}

Mat ScenarioConfig::filter_q_step() const {
    return q_basis == QBasis::per_second ? Mat(filters.q_cov * dt) : filters.q_cov;
}

namespace {

void check_spd(const Mat& m, const std::string& what, bool allow_zero) {
    try {
        psd_factor(m);
    } catch (const ConfigError&) {
        throw ConfigError(what + " must be symmetric positive semi-definite");
    }
    if (!allow_zero) {
        Eigen::LLT<Mat> llt(m);
        if (llt.info() != Eigen::Success) {
            throw ConfigError(what + " must be positive definite");
        }
    }
}

} // namespace

void ScenarioConfig::validate() const {
    if (!(dt > 0.0)) {
        throw ConfigError("simulation.dt must be > 0");
    }
    if (!(horizon > 0.0)) {
        throw ConfigError("simulation.horizon must be > 0");
    }
    if (monte_carlo_runs < 1) {
        throw ConfigError("simulation.monte_carlo_runs must be >= 1");
    }
    machine.validate();
    if (fault) {
        if (!(fault->fault_time >= 0.0)) {
            throw ConfigError("fault.time must be >= 0");
        }
        fault->faulted_params.validate();
    }
    if (!x0_true.allFinite() || x0_est.size() != 4 || !x0_est.allFinite()) {
        throw ConfigError("initial.x_true / initial.x_est must be finite 4-vectors");
    }
    if (inputs.t_m < 0.0 || !std::isfinite(inputs.t_m) || !std::isfinite(inputs.e_fd_initial) ||
        !std::isfinite(inputs.e_fd_final)) {
        throw ConfigError("inputs: t_m must be >= 0 and all inputs finite");
    }
    if (noise.q_cov.rows() != 4 || filters.q_cov.rows() != 4 || p0.rows() != 4) {
        throw ConfigError("noise.q_diag, filters.q_diag and initial.p0_diag need 4 entries");
    }
    check_spd(noise.q_cov, "noise.q_diag", true);
    check_spd(noise.r_cov, "noise.r", true);
    check_spd(filters.q_cov, "filters.q_diag", true);
    check_spd(filters.r_cov, "filters.r", false);
    check_spd(p0, "initial.p0_diag", false);
    if (filters.selection.empty()) {
        throw ConfigError("filters.select must name at least one filter");
    }
    attack.validate();
    if (attack.kind == AttackKind::fdi && attack.gain_mask.size() != 0 && attack.gain_mask.size() != 4) {
        throw ConfigError("attack.gain_mask must have 4 entries");
    }
    if (attack.kind == AttackKind::dos && attack.t_start <= 0.0) {
        throw ConfigError("attack.window: DoS window must start after the first measurement");
    }
    detector.validate();
    if (metrics_interval && !(metrics_interval->first <= metrics_interval->second)) {
        throw ConfigError("metrics.interval must satisfy start <= end");
    }
    if (calibration.skip < 0.0) {
        throw ConfigError("calibration.skip must be >= 0");
    }
}

namespace {

using Keys = std::initializer_list<const char*>;

void check_keys(const YAML::Node& node, const std::string& section, Keys allowed) {
    if (!node.IsMap()) {
        throw ConfigError("config: '" + section + "' must be a mapping");
    }
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ConfigError("config: unknown key '" + (section.empty() ? key : section + "." + key) + "'");
        }
    }
}

template <typename T>
T required(const YAML::Node& parent, const char* key, const std::string& section) {
    const YAML::Node node = parent[key];
    if (!node) {
        throw ConfigError("config: missing required key '" + section + "." + key + "'");
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config: bad value for '" + section + "." + key + "'");
    }
}

template <typename T>
void optional_into(const YAML::Node& parent, const char* key, const std::string& section, T& out) {
    if (const YAML::Node node = parent[key]) {
        try {
            out = node.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("config: bad value for '" + section + "." + key + "'");
        }
    }
}

Vec read_vec(const YAML::Node& node, const std::string& name, std::size_t expected) {
    std::vector<double> values;
    try {
        values = node.as<std::vector<double>>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config: '" + name + "' must be a list of numbers");
    }
    if (expected != 0 && values.size() != expected) {
        throw ConfigError("config: '" + name + "' must have " + std::to_string(expected) + " entries");
    }
    return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Mat diag_from(const YAML::Node& parent, const char* key, const std::string& section) {
    const YAML::Node node = parent[key];
    if (!node) {
        throw ConfigError("config: missing required key '" + section + "." + key + "'");
    }
    return read_vec(node, section + "." + key, 4).asDiagonal();
}

Mat scalar_cov(const YAML::Node& parent, const char* key, const std::string& section) {
    return Mat::Constant(1, 1, required<double>(parent, key, section));
}

void read_machine(const YAML::Node& node, const std::string& section, MachineParams& p) {
    if (section == "fault") {
        check_keys(node, section,
                   {"time", "d_damping", "j_inertia", "t_do_prime", "t_qo_prime", "x_d", "x_q", "x_d_prime",
                    "x_q_prime", "v_t", "omega_0"});
    } else {
        check_keys(node, section,
                   {"d_damping", "j_inertia", "t_do_prime", "t_qo_prime", "x_d", "x_q", "x_d_prime", "x_q_prime",
                    "v_t", "omega_0"});
    }
    optional_into(node, "d_damping", section, p.d_damping);
    optional_into(node, "j_inertia", section, p.j_inertia);
    optional_into(node, "t_do_prime", section, p.t_do_prime);
    optional_into(node, "t_qo_prime", section, p.t_qo_prime);
    optional_into(node, "x_d", section, p.x_d);
    optional_into(node, "x_q", section, p.x_q);
    optional_into(node, "x_d_prime", section, p.x_d_prime);
    optional_into(node, "x_q_prime", section, p.x_q_prime);
    optional_into(node, "v_t", section, p.v_t);
    optional_into(node, "omega_0", section, p.omega_0);
}

std::vector<FilterKind> read_selection(const YAML::Node& node) {
    std::vector<FilterKind> out;
    for (const auto& name : node.as<std::vector<std::string>>()) {
        const auto kind = parse_filter(name);
        if (!kind) {
            throw ConfigError("config: unknown filter '" + name + "' (expected ekf, ckf, sckf)");
        }
        if (std::find(out.begin(), out.end(), *kind) == out.end()) {
            out.push_back(*kind);
        }
    }
    // Canonical order keeps trace columns stable regardless of listing order.
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<double, double> read_window(const YAML::Node& node, const std::string& name) {
    const Vec w = read_vec(node, name, 2);
    return {w(0), w(1)};
}

} // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: YAML parse error: ") + e.what());
    }
    if (!root || !root.IsMap()) {
        throw ConfigError("config: document must be a mapping");
    }
    check_keys(root, "",
               {"name", "simulation", "machine", "inputs", "initial", "noise", "filters", "fault", "attack", "detector",
                "metrics", "calibration"});

    ScenarioConfig c;
    optional_into(root, "name", "", c.name);

    const YAML::Node sim = root["simulation"];
    if (!sim) {
        throw ConfigError("config: missing required key 'simulation'");
    }
    check_keys(sim, "simulation", {"dt", "horizon", "seed", "monte_carlo_runs"});
    c.dt = required<double>(sim, "dt", "simulation");
    c.horizon = required<double>(sim, "horizon", "simulation");
    c.noise.seed = required<std::uint64_t>(sim, "seed", "simulation");
    optional_into(sim, "monte_carlo_runs", "simulation", c.monte_carlo_runs);

    if (const YAML::Node m = root["machine"]) {
        read_machine(m, "machine", c.machine);
    }

    if (const YAML::Node in = root["inputs"]) {
        check_keys(in, "inputs", {"t_m", "e_fd_initial", "e_fd_final", "e_fd_step_time"});
        optional_into(in, "t_m", "inputs", c.inputs.t_m);
        optional_into(in, "e_fd_initial", "inputs", c.inputs.e_fd_initial);
        optional_into(in, "e_fd_final", "inputs", c.inputs.e_fd_final);
        optional_into(in, "e_fd_step_time", "inputs", c.inputs.e_fd_step_time);
    }

    if (const YAML::Node init = root["initial"]) {
        check_keys(init, "initial", {"x_true", "x_est", "p0_diag"});
        if (init["x_true"]) {
            c.x0_true = read_vec(init["x_true"], "initial.x_true", 4);
        }
        if (init["x_est"]) {
            c.x0_est = read_vec(init["x_est"], "initial.x_est", 4);
        }
        if (init["p0_diag"]) {
            c.p0 = read_vec(init["p0_diag"], "initial.p0_diag", 4).asDiagonal();
        }
    }

    const YAML::Node noise = root["noise"];
    if (!noise) {
        throw ConfigError("config: missing required key 'noise'");
    }
    check_keys(noise, "noise", {"q_diag", "q_basis", "r"});
    c.noise.q_cov = diag_from(noise, "q_diag", "noise");
    if (noise["q_basis"]) {
        const auto basis = noise["q_basis"].as<std::string>();
        if (basis == "per_step") {
            c.q_basis = QBasis::per_step;
        } else if (basis == "per_second") {
            c.q_basis = QBasis::per_second;
        } else {
            throw ConfigError("config: noise.q_basis must be 'per_step' or 'per_second'");
        }
    }
    c.noise.r_cov = scalar_cov(noise, "r", "noise");
    // Filters default to the truth noise unless overridden.
    c.filters.q_cov = c.noise.q_cov;
    c.filters.r_cov = c.noise.r_cov;

    if (const YAML::Node f = root["filters"]) {
        check_keys(f, "filters", {"select", "q_diag", "r", "covariance_form"});
        if (f["select"]) {
            c.filters.selection = read_selection(f["select"]);
        }
        if (f["q_diag"]) {
            c.filters.q_cov = diag_from(f, "q_diag", "filters");
        }
        if (f["r"]) {
            c.filters.r_cov = scalar_cov(f, "r", "filters");
        }
        if (f["covariance_form"]) {
            const auto form = f["covariance_form"].as<std::string>();
            if (form == "simple") {
                c.filters.form = CovarianceForm::simple;
            } else if (form == "joseph") {
                c.filters.form = CovarianceForm::joseph;
            } else {
                throw ConfigError("config: filters.covariance_form must be 'simple' or 'joseph'");
            }
        }
    }

    if (const YAML::Node f = root["fault"]) {
        ParamFault fault;
        fault.fault_time = required<double>(f, "time", "fault");
        fault.faulted_params = c.machine;
        read_machine(f, "fault", fault.faulted_params);
        c.fault = fault;
    }

    if (const YAML::Node a = root["attack"]) {
        check_keys(a, "attack",
                   {"kind", "window", "amplitude", "frequency", "delay", "amplitude_bound", "gain_mask", "fdi_mode"});
        const auto kind_name = required<std::string>(a, "kind", "attack");
        const auto kind = parse_attack(kind_name);
        if (!kind) {
            throw ConfigError("config: unknown attack kind '" + kind_name + "'");
        }
        c.attack = default_attack(*kind, c.horizon);
        if (a["window"]) {
            std::tie(c.attack.t_start, c.attack.t_end) = read_window(a["window"], "attack.window");
        }
        optional_into(a, "amplitude", "attack", c.attack.amplitude);
        optional_into(a, "frequency", "attack", c.attack.frequency);
        optional_into(a, "delay", "attack", c.attack.delay);
        optional_into(a, "amplitude_bound", "attack", c.attack.amplitude_bound);
        if (a["gain_mask"]) {
            c.attack.gain_mask = a["gain_mask"].size() == 0 ? Vec() : read_vec(a["gain_mask"], "attack.gain_mask", 4);
        }
        if (a["fdi_mode"]) {
            const auto mode = a["fdi_mode"].as<std::string>();
            if (mode == "additive") {
                c.attack.fdi_mode = FdiMode::additive;
            } else if (mode == "cancel_replace") {
                c.attack.fdi_mode = FdiMode::cancel_replace;
            } else {
                throw ConfigError("config: attack.fdi_mode must be 'additive' or 'cancel_replace'");
            }
        }
    }

    if (const YAML::Node d = root["detector"]) {
        check_keys(d, "detector", {"alpha", "euclid_threshold", "euclid_window"});
        optional_into(d, "alpha", "detector", c.detector.alpha);
        optional_into(d, "euclid_threshold", "detector", c.detector.euclid_threshold);
        optional_into(d, "euclid_window", "detector", c.detector.euclid_window);
    }
    c.detector.dof = 1;
    if (!(c.detector.alpha > 0.0 && c.detector.alpha < 1.0)) {
        throw ConfigError("config: detector.alpha must lie in (0, 1)");
    }
    c.detector.chi2_threshold = chi2_threshold_for(c.detector.dof, c.detector.alpha);

    if (const YAML::Node m = root["metrics"]) {
        check_keys(m, "metrics", {"interval"});
        if (m["interval"]) {
            c.metrics_interval = read_window(m["interval"], "metrics.interval");
        }
    }

    if (const YAML::Node cal = root["calibration"]) {
        check_keys(cal, "calibration", {"skip", "filter"});
        optional_into(cal, "skip", "calibration", c.calibration.skip);
        if (cal["filter"]) {
            const auto kind = parse_filter(cal["filter"].as<std::string>());
            if (!kind) {
                throw ConfigError("config: calibration.filter must be ekf, ckf or sckf");
            }
            c.calibration.filter = *kind;
        }
    }

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

void emit_machine(YAML::Emitter& out, const MachineParams& p) {
    out << YAML::Key << "d_damping" << YAML::Value << p.d_damping;
    out << YAML::Key << "j_inertia" << YAML::Value << p.j_inertia;
    out << YAML::Key << "t_do_prime" << YAML::Value << p.t_do_prime;
    out << YAML::Key << "t_qo_prime" << YAML::Value << p.t_qo_prime;
    out << YAML::Key << "x_d" << YAML::Value << p.x_d;
    out << YAML::Key << "x_q" << YAML::Value << p.x_q;
    out << YAML::Key << "x_d_prime" << YAML::Value << p.x_d_prime;
    out << YAML::Key << "x_q_prime" << YAML::Value << p.x_q_prime;
    out << YAML::Key << "v_t" << YAML::Value << p.v_t;
    out << YAML::Key << "omega_0" << YAML::Value << p.omega_0;
}

void emit_list(YAML::Emitter& out, const char* key, const std::vector<double>& values) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << values;
}

} // namespace

std::string to_yaml(const ScenarioConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c.name;

    out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dt" << YAML::Value << c.dt;
    out << YAML::Key << "horizon" << YAML::Value << c.horizon;
    out << YAML::Key << "seed" << YAML::Value << c.noise.seed;
    out << YAML::Key << "monte_carlo_runs" << YAML::Value << c.monte_carlo_runs;
    out << YAML::EndMap;

    out << YAML::Key << "machine" << YAML::Value << YAML::BeginMap;
    emit_machine(out, c.machine);
    out << YAML::EndMap;

    out << YAML::Key << "inputs" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "t_m" << YAML::Value << c.inputs.t_m;
    out << YAML::Key << "e_fd_initial" << YAML::Value << c.inputs.e_fd_initial;
    out << YAML::Key << "e_fd_final" << YAML::Value << c.inputs.e_fd_final;
    out << YAML::Key << "e_fd_step_time" << YAML::Value << c.inputs.e_fd_step_time;
    out << YAML::EndMap;

    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    emit_list(out, "x_true", to_std(c.x0_true));
    emit_list(out, "x_est", to_std(c.x0_est));
    emit_list(out, "p0_diag", to_std(c.p0.diagonal()));
    out << YAML::EndMap;

    out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
    emit_list(out, "q_diag", to_std(c.noise.q_cov.diagonal()));
    out << YAML::Key << "q_basis" << YAML::Value << (c.q_basis == QBasis::per_second ? "per_second" : "per_step");
    out << YAML::Key << "r" << YAML::Value << c.noise.r_cov(0, 0);
    out << YAML::EndMap;

    out << YAML::Key << "filters" << YAML::Value << YAML::BeginMap;
    std::vector<std::string> names;
    for (FilterKind k : c.filters.selection) {
        names.emplace_back(filter_name(k));
    }
    out << YAML::Key << "select" << YAML::Value << YAML::Flow << names;
    emit_list(out, "q_diag", to_std(c.filters.q_cov.diagonal()));
    out << YAML::Key << "r" << YAML::Value << c.filters.r_cov(0, 0);
    out << YAML::Key << "covariance_form" << YAML::Value
        << (c.filters.form == CovarianceForm::joseph ? "joseph" : "simple");
    out << YAML::EndMap;

    if (c.fault) {
        out << YAML::Key << "fault" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "time" << YAML::Value << c.fault->fault_time;
        emit_machine(out, c.fault->faulted_params);
        out << YAML::EndMap;
    }

    if (c.attack.kind != AttackKind::none) {
        const AttackSpec& a = c.attack;
        out << YAML::Key << "attack" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "kind" << YAML::Value << std::string(attack_name(a.kind));
        emit_list(out, "window", {a.t_start, a.t_end});
        out << YAML::Key << "amplitude" << YAML::Value << a.amplitude;
        out << YAML::Key << "frequency" << YAML::Value << a.frequency;
        out << YAML::Key << "delay" << YAML::Value << a.delay;
        out << YAML::Key << "amplitude_bound" << YAML::Value << a.amplitude_bound;
        emit_list(out, "gain_mask", a.gain_mask.size() != 0 ? to_std(a.gain_mask) : std::vector<double>{});
        out << YAML::Key << "fdi_mode" << YAML::Value
            << (a.fdi_mode == FdiMode::additive ? "additive" : "cancel_replace");
        out << YAML::EndMap;
    }

    out << YAML::Key << "detector" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "alpha" << YAML::Value << c.detector.alpha;
    out << YAML::Key << "euclid_threshold" << YAML::Value << c.detector.euclid_threshold;
    out << YAML::Key << "euclid_window" << YAML::Value << c.detector.euclid_window;
    out << YAML::EndMap;

    if (c.metrics_interval) {
        out << YAML::Key << "metrics" << YAML::Value << YAML::BeginMap;
        emit_list(out, "interval", {c.metrics_interval->first, c.metrics_interval->second});
        out << YAML::EndMap;
    }

    out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "skip" << YAML::Value << c.calibration.skip;
    out << YAML::Key << "filter" << YAML::Value << std::string(filter_name(c.calibration.filter));
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace dse
