#pragma once

#include <Eigen/Dense>

#include "dse/plant.hpp"

namespace dse {

// Fourth-order single-machine infinite-bus model.
//
// State  x = [delta, domega, eq_prime, ed_prime]  (elec. rad, pu, pu, pu)
// Input  u = [t_m, e_fd]                          (pu, pu)
// Output y = T_e, the air-gap torque.
using StateVector = Eigen::Vector4d;

namespace state {
inline constexpr int delta = 0;
inline constexpr int domega = 1;
inline constexpr int eq_prime = 2;
inline constexpr int ed_prime = 3;
} // namespace state

struct InputVector {
    double t_m = 0.8;
    double e_fd = 2.11;

    Vec to_vec() const;
    static InputVector from_vec(const Vec& u);
};

struct MachineParams {
    double d_damping = 0.05;
    double j_inertia = 10.0;
    double t_do_prime = 0.13;
    double t_qo_prime = 0.01;
    double x_d = 2.06;
    double x_q = 1.21;
    double x_d_prime = 0.375;
    double x_q_prime = 0.375;
    double v_t = 1.02;
    double omega_0 = 377.0;

    // Throws ConfigError naming the first violated constraint.
    void validate() const;

    friend bool operator==(const MachineParams&, const MachineParams&) = default;
};

struct ElectricalOutputs {
    double t_e;
    double i_d;
    double i_q;
};

struct ParamFault {
    double fault_time = 0.0;
    MachineParams faulted_params;
};

ElectricalOutputs electrical_outputs(const StateVector& x, const MachineParams& p);

// Same expression as electrical_outputs(x, p).t_e; shares the implementation.
double measure(const StateVector& x, const MachineParams& p);

StateVector machine_derivatives(const StateVector& x, const InputVector& u, const MachineParams& p);

/// One classical RK4 step of machine_derivatives. This is the filters' f.
StateVector step_discrete(const StateVector& x, const InputVector& u, const MachineParams& p, double dt);

/// d(measure)/dx, a 1x4 row. Only delta and eq_prime enter the torque.
Eigen::RowVector4d measure_jacobian(const StateVector& x, const MachineParams& p);

MachineParams apply_fault(const MachineParams& p, const ParamFault& fault, double t);

/// Plant with f = step_discrete(., ., p, dt), h = measure(., p), analytic jac_h,
/// and a batched (SIMD-dispatched) f for cubature propagation.
PlantModel make_smib_plant(const MachineParams& p, double dt);

} // namespace dse
