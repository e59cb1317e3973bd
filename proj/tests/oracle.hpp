#ifndef MARYLAND_TESTS_ORACLE_HPP
#define MARYLAND_TESTS_ORACLE_HPP

// Independent high-precision evaluation of the closed-form curves, used to
// freeze expected values.  Kept separate from the library implementation on
// purpose: everything here goes through 200-bit MPFR arithmetic and its own
// bisection, so a library bug cannot hide behind a shared code path.

#include <mpfr.h>

namespace oracle {

inline constexpr mpfr_prec_t kPrec = 200;

struct Real {
    mpfr_t v;
    Real() { mpfr_init2(v, kPrec); mpfr_set_ui(v, 0, MPFR_RNDN); }
    explicit Real(double d) { mpfr_init2(v, kPrec); mpfr_set_d(v, d, MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v, kPrec); mpfr_set(v, o.v, MPFR_RNDN); }
    Real& operator=(const Real& o) { mpfr_set(v, o.v, MPFR_RNDN); return *this; }
    ~Real() { mpfr_clear(v); }
    double d() const { return mpfr_get_d(v, MPFR_RNDN); }
};

// 4 cosh(gamma) = sqrt((2+e)^2 + lambda^2) + sqrt((2-e)^2 + lambda^2)
inline Real lyapunov(double lambda, double e) {
    Real a, b, c, out;
    mpfr_set_d(a.v, 2.0 + e, MPFR_RNDN);
    mpfr_sqr(a.v, a.v, MPFR_RNDN);
    mpfr_set_d(b.v, lambda, MPFR_RNDN);
    mpfr_sqr(b.v, b.v, MPFR_RNDN);
    mpfr_add(a.v, a.v, b.v, MPFR_RNDN);
    mpfr_sqrt(a.v, a.v, MPFR_RNDN);
    mpfr_set_d(c.v, 2.0 - e, MPFR_RNDN);
    mpfr_sqr(c.v, c.v, MPFR_RNDN);
    mpfr_add(c.v, c.v, b.v, MPFR_RNDN);
    mpfr_sqrt(c.v, c.v, MPFR_RNDN);
    mpfr_add(a.v, a.v, c.v, MPFR_RNDN);
    mpfr_div_ui(a.v, a.v, 4, MPFR_RNDN);
    mpfr_acosh(out.v, a.v, MPFR_RNDN);
    return out;
}

// k = 1/2 + arctan(e tanh(gamma) / lambda) / pi
inline Real ids(double lambda, double e) {
    Real g = lyapunov(lambda, e), t, pi, out;
    mpfr_tanh(t.v, g.v, MPFR_RNDN);
    mpfr_mul_d(t.v, t.v, e, MPFR_RNDN);
    mpfr_div_d(t.v, t.v, lambda, MPFR_RNDN);
    mpfr_atan(t.v, t.v, MPFR_RNDN);
    mpfr_const_pi(pi.v, MPFR_RNDN);
    mpfr_div(t.v, t.v, pi.v, MPFR_RNDN);
    mpfr_set_d(out.v, 0.5, MPFR_RNDN);
    mpfr_add(out.v, out.v, t.v, MPFR_RNDN);
    return out;
}

// plain bisection for ids(lambda, e) = k_target
inline double ids_inverse(double lambda, double k_target, int iters = 200) {
    double lo = -1.0, hi = 1.0;
    while (ids(lambda, lo).d() > k_target) lo *= 2.0;
    while (ids(lambda, hi).d() < k_target) hi *= 2.0;
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (ids(lambda, mid).d() < k_target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// e > 0 with lyapunov(lambda, e) = target
inline double lyapunov_inverse(double lambda, double target, int iters = 200) {
    double lo = 0.0, hi = 2.0 + lambda;
    while (lyapunov(lambda, hi).d() < target) hi *= 2.0;
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (lyapunov(lambda, mid).d() < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle

#endif
