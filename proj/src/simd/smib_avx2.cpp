// AVX2/FMA batch RK4 for the SMIB model. Compiled with -mavx2 -mfma; must not
// include headers that instantiate inline library code shared with other TUs.

#include <immintrin.h>

#include "dse/simd/kernel_args.hpp"

namespace dse::simd {

namespace {

// Cody-Waite split of pi/4.
constexpr double kPio4Hi = 7.85398125648498535156e-1;
constexpr double kPio4Mid = 3.77489470793079817668e-8;
constexpr double kPio4Lo = 2.69515142907905952645e-15;
constexpr double kFourOverPi = 1.27323954473516268615;

// Minimax coefficients on [-pi/4, pi/4] (Cephes sin.c).
constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
                            -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
                            2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2};

inline __m256d poly5(__m256d zz, const double (&c)[6]) {
    __m256d acc = _mm256_set1_pd(c[0]);
    for (int i = 1; i < 6; ++i) {
        acc = _mm256_fmadd_pd(acc, zz, _mm256_set1_pd(c[i]));
    }
    return acc;
}

inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    const __m256d x_sign = _mm256_and_pd(x, sign_bit);
    const __m256d ax = _mm256_andnot_pd(sign_bit, x);

    // Octant index rounded up to even, so z lands in [-pi/4, pi/4].
    __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
    const __m256d half_y = _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.5)));
    y = _mm256_add_pd(y, _mm256_sub_pd(y, _mm256_add_pd(half_y, half_y)));

    __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kPio4Hi), ax);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kPio4Mid), z);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kPio4Lo), z);

    // Quadrant q = (y / 2) mod 4.
    const __m256d q_raw = _mm256_mul_pd(y, _mm256_set1_pd(0.5));
    const __m256d q = _mm256_sub_pd(
        q_raw, _mm256_mul_pd(_mm256_set1_pd(4.0), _mm256_floor_pd(_mm256_mul_pd(q_raw, _mm256_set1_pd(0.25)))));

    const __m256d zz = _mm256_mul_pd(z, z);
    const __m256d s_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly5(zz, kSin), z);
    __m256d c_poly = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0));
    c_poly = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), poly5(zz, kCos), c_poly);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d q_odd = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ), _mm256_cmp_pd(q, three, _CMP_EQ_OQ));
    const __m256d sin_neg = _mm256_cmp_pd(q, two, _CMP_GE_OQ);
    const __m256d cos_neg = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ), _mm256_cmp_pd(q, two, _CMP_EQ_OQ));

    __m256d s = _mm256_blendv_pd(s_poly, c_poly, q_odd);
    __m256d c = _mm256_blendv_pd(c_poly, s_poly, q_odd);
    s = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign_bit));
    c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
    s_out = _mm256_xor_pd(s, x_sign);
    c_out = c;
}

struct Lanes4 {
    __m256d delta;
    __m256d domega;
    __m256d eqp;
    __m256d edp;
};

struct Coeffs {
    __m256d t_m, e_fd, damping, inv_j, inv_tdo, inv_tqo, xd_minus_xdp, xq_minus_xqp;
    __m256d torque_gain, saliency, v_t, inv_xdp, inv_xq, omega_0;
};

inline Coeffs make_coeffs(const SmibKernelArgs& a) {
    Coeffs c{};
    c.t_m = _mm256_set1_pd(a.t_m);
    c.e_fd = _mm256_set1_pd(a.e_fd);
    c.damping = _mm256_set1_pd(a.d_damping);
    c.inv_j = _mm256_set1_pd(1.0 / a.j_inertia);
    c.inv_tdo = _mm256_set1_pd(1.0 / a.t_do_prime);
    c.inv_tqo = _mm256_set1_pd(1.0 / a.t_qo_prime);
    c.xd_minus_xdp = _mm256_set1_pd(a.x_d - a.x_d_prime);
    c.xq_minus_xqp = _mm256_set1_pd(a.x_q - a.x_q_prime);
    c.torque_gain = _mm256_set1_pd(a.v_t / a.x_d_prime);
    c.saliency = _mm256_set1_pd(0.5 * a.v_t * a.v_t * (1.0 / a.x_q - 1.0 / a.x_q_prime));
    c.v_t = _mm256_set1_pd(a.v_t);
    c.inv_xdp = _mm256_set1_pd(1.0 / a.x_d_prime);
    c.inv_xq = _mm256_set1_pd(1.0 / a.x_q);
    c.omega_0 = _mm256_set1_pd(a.omega_0);
    return c;
}

inline Lanes4 derivatives(const Lanes4& x, const Coeffs& c) {
    __m256d sd;
    __m256d cd;
    sincos_pd(x.delta, sd, cd);
    const __m256d s2d = _mm256_mul_pd(_mm256_add_pd(sd, sd), cd);
    const __m256d t_e = _mm256_fmadd_pd(c.saliency, s2d, _mm256_mul_pd(_mm256_mul_pd(c.torque_gain, x.eqp), sd));
    const __m256d i_d = _mm256_mul_pd(_mm256_fnmadd_pd(c.v_t, cd, x.eqp), c.inv_xdp);
    const __m256d i_q = _mm256_mul_pd(_mm256_mul_pd(c.v_t, sd), c.inv_xq);

    Lanes4 dx{};
    dx.delta = _mm256_mul_pd(c.omega_0, x.domega);
    dx.domega = _mm256_mul_pd(_mm256_fnmadd_pd(c.damping, x.domega, _mm256_sub_pd(c.t_m, t_e)), c.inv_j);
    dx.eqp = _mm256_mul_pd(_mm256_fnmadd_pd(c.xd_minus_xdp, i_d, _mm256_sub_pd(c.e_fd, x.eqp)), c.inv_tdo);
    dx.edp = _mm256_mul_pd(_mm256_fnmadd_pd(c.xq_minus_xqp, i_q, _mm256_sub_pd(_mm256_setzero_pd(), x.edp)),
                           c.inv_tqo);
    return dx;
}

inline Lanes4 axpy(const Lanes4& x, __m256d h, const Lanes4& k) {
    return {_mm256_fmadd_pd(h, k.delta, x.delta), _mm256_fmadd_pd(h, k.domega, x.domega),
            _mm256_fmadd_pd(h, k.eqp, x.eqp), _mm256_fmadd_pd(h, k.edp, x.edp)};
}

inline __m256d rk4_combine(__m256d x, __m256d k1, __m256d k2, __m256d k3, __m256d k4, __m256d dt6) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d sum = _mm256_add_pd(_mm256_add_pd(k1, k4), _mm256_mul_pd(two, _mm256_add_pd(k2, k3)));
    return _mm256_fmadd_pd(dt6, sum, x);
}

} // namespace

std::size_t rk4_smib_avx2(const SmibLanes& lanes, const SmibKernelArgs& args) {
    const Coeffs c = make_coeffs(args);
    const __m256d half_dt = _mm256_set1_pd(0.5 * args.dt);
    const __m256d dt = _mm256_set1_pd(args.dt);
    const __m256d dt6 = _mm256_set1_pd(args.dt / 6.0);
    const std::size_t full = lanes.count - lanes.count % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        const Lanes4 x{_mm256_loadu_pd(lanes.delta + i), _mm256_loadu_pd(lanes.domega + i),
                       _mm256_loadu_pd(lanes.eq_prime + i), _mm256_loadu_pd(lanes.ed_prime + i)};
        const Lanes4 k1 = derivatives(x, c);
        const Lanes4 k2 = derivatives(axpy(x, half_dt, k1), c);
        const Lanes4 k3 = derivatives(axpy(x, half_dt, k2), c);
        const Lanes4 k4 = derivatives(axpy(x, dt, k3), c);
        _mm256_storeu_pd(lanes.delta + i, rk4_combine(x.delta, k1.delta, k2.delta, k3.delta, k4.delta, dt6));
        _mm256_storeu_pd(lanes.domega + i, rk4_combine(x.domega, k1.domega, k2.domega, k3.domega, k4.domega, dt6));
        _mm256_storeu_pd(lanes.eq_prime + i, rk4_combine(x.eqp, k1.eqp, k2.eqp, k3.eqp, k4.eqp, dt6));
        _mm256_storeu_pd(lanes.ed_prime + i, rk4_combine(x.edp, k1.edp, k2.edp, k3.edp, k4.edp, dt6));
    }
    return full;
}

std::size_t sincos_avx2(const double* x, double* sin_out, double* cos_out, std::size_t count) {
    const std::size_t full = count - count % 4;
    for (std::size_t i = 0; i < full; i += 4) {
        __m256d s;
        __m256d c;
        sincos_pd(_mm256_loadu_pd(x + i), s, c);
        _mm256_storeu_pd(sin_out + i, s);
        _mm256_storeu_pd(cos_out + i, c);
    }
    return full;
}

} // namespace dse::simd
