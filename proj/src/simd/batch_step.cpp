#include "dse/simd/batch_step.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "dse/errors.hpp"

namespace dse::simd {

std::string_view level_name(Level level) { return level == Level::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(DSE_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported;
#else
    return false;
#endif
}

Level detect_level() {
    if (const char* env = std::getenv("DSE_SIMD")) {
        if (std::string_view(env) == "scalar") {
            return Level::scalar;
        }
    }
    return avx2_available() ? Level::avx2 : Level::scalar;
}

SmibKernelArgs make_kernel_args(const InputVector& u, const MachineParams& p, double dt) {
    return SmibKernelArgs{u.t_m,     u.e_fd,          p.d_damping, p.j_inertia, p.t_do_prime,
                          p.t_qo_prime, p.x_d,        p.x_q,       p.x_d_prime, p.x_q_prime,
                          p.v_t,     p.omega_0,       dt};
}

namespace {

MachineParams params_from(const SmibKernelArgs& a) {
    MachineParams p;
    p.d_damping = a.d_damping;
    p.j_inertia = a.j_inertia;
    p.t_do_prime = a.t_do_prime;
    p.t_qo_prime = a.t_qo_prime;
    p.x_d = a.x_d;
    p.x_q = a.x_q;
    p.x_d_prime = a.x_d_prime;
    p.x_q_prime = a.x_q_prime;
    p.v_t = a.v_t;
    p.omega_0 = a.omega_0;
    return p;
}

void scalar_range(const SmibLanes& lanes, const SmibKernelArgs& args, std::size_t begin) {
    const MachineParams p = params_from(args);
    const InputVector u{args.t_m, args.e_fd};
    for (std::size_t i = begin; i < lanes.count; ++i) {
        const StateVector x(lanes.delta[i], lanes.domega[i], lanes.eq_prime[i], lanes.ed_prime[i]);
        const StateVector next = step_discrete(x, u, p, args.dt);
        lanes.delta[i] = next(state::delta);
        lanes.domega[i] = next(state::domega);
        lanes.eq_prime[i] = next(state::eq_prime);
        lanes.ed_prime[i] = next(state::ed_prime);
    }
}

} // namespace

void batch_step_scalar(const SmibLanes& lanes, const SmibKernelArgs& args) { scalar_range(lanes, args, 0); }

void batch_step_avx2(const SmibLanes& lanes, const SmibKernelArgs& args) {
#if defined(DSE_HAVE_AVX2_KERNEL)
    const std::size_t done = rk4_smib_avx2(lanes, args);
    scalar_range(lanes, args, done);
#else
    scalar_range(lanes, args, 0);
#endif
}

BatchStepFn batch_step_for(Level level) {
    return level == Level::avx2 && avx2_available() ? &batch_step_avx2 : &batch_step_scalar;
}

BatchStepFn select_batch_step() { return batch_step_for(detect_level()); }

void step_columns(BatchStepFn kernel, Mat& points, const InputVector& u, const MachineParams& p, double dt) {
    if (points.rows() != 4) {
        throw ConfigError("step_columns: expected 4 x m state matrix");
    }
    // Eigen is column-major, so the transpose gives contiguous per-state rows.
    Eigen::Matrix<double, Eigen::Dynamic, 4> soa = points.transpose();
    const auto m = static_cast<std::size_t>(soa.rows());
    const SmibLanes lanes{soa.col(0).data(), soa.col(1).data(), soa.col(2).data(), soa.col(3).data(), m};
    kernel(lanes, make_kernel_args(u, p, dt));
    if (!soa.allFinite()) {
        throw NumericalError("step_columns: non-finite state after RK4 step");
    }
    points = soa.transpose();
}

} // namespace dse::simd
