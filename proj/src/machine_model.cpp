#include "dse/machine_model.hpp"

#include <cmath>
#include <string>

#include "dse/errors.hpp"
#include "dse/simd/batch_step.hpp"

namespace dse {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw ConfigError(std::string("MachineParams: ") + what);
    }
}

void require_finite(const StateVector& v, const char* where) {
    if (!v.allFinite()) {
        throw NumericalError(std::string(where) + ": non-finite state");
    }
}

} // namespace

Vec InputVector::to_vec() const { return Eigen::Vector2d(t_m, e_fd); }

InputVector InputVector::from_vec(const Vec& u) { return InputVector{u(0), u(1)}; }

void MachineParams::validate() const {
    require(std::isfinite(d_damping), "d_damping must be finite");
    require(j_inertia > 0.0, "j_inertia must be > 0");
    require(t_do_prime > 0.0, "t_do_prime must be > 0");
    require(t_qo_prime > 0.0, "t_qo_prime must be > 0");
    require(x_d_prime > 0.0 && x_d >= x_d_prime, "x_d >= x_d_prime > 0 violated");
    require(x_q_prime > 0.0 && x_q >= x_q_prime, "x_q >= x_q_prime > 0 violated");
    require(v_t > 0.0, "v_t must be > 0");
    require(omega_0 > 0.0, "omega_0 must be > 0");
}

ElectricalOutputs electrical_outputs(const StateVector& x, const MachineParams& p) {
    const double delta = x(state::delta);
    const double eqp = x(state::eq_prime);
    const double sin_d = std::sin(delta);
    const double t_e = (p.v_t / p.x_d_prime) * eqp * sin_d +
                       0.5 * p.v_t * p.v_t * (1.0 / p.x_q - 1.0 / p.x_q_prime) * std::sin(2.0 * delta);
    const double i_d = (eqp - p.v_t * std::cos(delta)) / p.x_d_prime;
    const double i_q = p.v_t * sin_d / p.x_q;
    return {t_e, i_d, i_q};
}

double measure(const StateVector& x, const MachineParams& p) { return electrical_outputs(x, p).t_e; }

StateVector machine_derivatives(const StateVector& x, const InputVector& u, const MachineParams& p) {
    const auto [t_e, i_d, i_q] = electrical_outputs(x, p);
    StateVector dx;
    dx(state::delta) = p.omega_0 * x(state::domega);
    dx(state::domega) = (u.t_m - t_e - p.d_damping * x(state::domega)) / p.j_inertia;
    dx(state::eq_prime) = (u.e_fd - x(state::eq_prime) - (p.x_d - p.x_d_prime) * i_d) / p.t_do_prime;
    dx(state::ed_prime) = (-x(state::ed_prime) - (p.x_q - p.x_q_prime) * i_q) / p.t_qo_prime;
    require_finite(dx, "machine_derivatives");
    return dx;
}

StateVector step_discrete(const StateVector& x, const InputVector& u, const MachineParams& p, double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("step_discrete: dt must be > 0");
    }
    const StateVector k1 = machine_derivatives(x, u, p);
    const StateVector k2 = machine_derivatives(x + 0.5 * dt * k1, u, p);
    const StateVector k3 = machine_derivatives(x + 0.5 * dt * k2, u, p);
    const StateVector k4 = machine_derivatives(x + dt * k3, u, p);
    StateVector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite(next, "step_discrete");
    return next;
}

Eigen::RowVector4d measure_jacobian(const StateVector& x, const MachineParams& p) {
    const double delta = x(state::delta);
    const double eqp = x(state::eq_prime);
    Eigen::RowVector4d jac = Eigen::RowVector4d::Zero();
    jac(state::delta) = (p.v_t / p.x_d_prime) * eqp * std::cos(delta) +
                        p.v_t * p.v_t * (1.0 / p.x_q - 1.0 / p.x_q_prime) * std::cos(2.0 * delta);
    jac(state::eq_prime) = (p.v_t / p.x_d_prime) * std::sin(delta);
    return jac;
}

MachineParams apply_fault(const MachineParams& p, const ParamFault& fault, double t) {
    return t >= fault.fault_time ? fault.faulted_params : p;
}

PlantModel make_smib_plant(const MachineParams& p, double dt) {
    p.validate();
    if (!(dt > 0.0)) {
        throw ConfigError("make_smib_plant: dt must be > 0");
    }
    PlantModel model;
    model.state_dim = 4;
    model.meas_dim = 1;
    model.f = [p, dt](const Vec& x, const Vec& u) -> Vec {
        return step_discrete(StateVector(x), InputVector::from_vec(u), p, dt);
    };
    model.h = [p](const Vec& x, const Vec&) -> Vec {
        Vec y(1);
        y(0) = measure(StateVector(x), p);
        return y;
    };
    model.jac_h = [p](const Vec& x, const Vec&) -> Mat { return measure_jacobian(StateVector(x), p); };
    const simd::BatchStepFn kernel = simd::select_batch_step();
    model.f_batch = [p, dt, kernel](Mat& points, const Vec& u) {
        simd::step_columns(kernel, points, InputVector::from_vec(u), p, dt);
    };
    return model;
}

} // namespace dse
