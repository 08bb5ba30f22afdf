#pragma once

// Plain-data argument block shared by the batch RK4 kernels. Kept free of
// library headers so the AVX2 translation unit pulls in nothing but intrinsics.

#include <cstddef>

namespace dse::simd {

struct SmibKernelArgs {
    double t_m;
    double e_fd;
    double d_damping;
    double j_inertia;
    double t_do_prime;
    double t_qo_prime;
    double x_d;
    double x_q;
    double x_d_prime;
    double x_q_prime;
    double v_t;
    double omega_0;
    double dt;
};

// Structure-of-arrays view over `count` machine states, advanced in place.
struct SmibLanes {
    double* delta;
    double* domega;
    double* eq_prime;
    double* ed_prime;
    std::size_t count;
};

#if defined(DSE_HAVE_AVX2_KERNEL)
// Processes the largest multiple of 4 lanes; returns how many were advanced.
std::size_t rk4_smib_avx2(const SmibLanes& lanes, const SmibKernelArgs& args);

// Vector sine/cosine used by the AVX2 kernel, exposed for accuracy tests.
// Processes the largest multiple of 4 entries; returns how many were written.
std::size_t sincos_avx2(const double* x, double* sin_out, double* cos_out, std::size_t count);
#endif

} // namespace dse::simd
