#ifndef MARYLAND_TRIG_HPP
#define MARYLAND_TRIG_HPP

#include <cmath>
#include <complex>

namespace maryland {

// sin(pi x), cos(pi x), tan(pi x) with exact argument reduction mod 2.
// Half-integer arguments map to exact zeros/infinities, so a phase that
// lands exactly on the potential's pole is detectable (cos_pi == 0).

namespace detail {
// Reduce x into [-1, 1) exactly (the subtraction is exact for |x| < 2^52).
inline double reduce_mod2(double x) {
    double r = std::fmod(x, 2.0);
    if (r >= 1.0) r -= 2.0;
    else if (r < -1.0) r += 2.0;
    return r;
}
} // namespace detail

inline double sin_pi(double x) {
    double r = detail::reduce_mod2(x);
    double s = 1.0;
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    return s * std::sin(M_PI * r);
}

inline double cos_pi(double x) {
    double r = std::fabs(detail::reduce_mod2(x));
    if (r == 0.5) return 0.0;
    if (r > 0.5) return -std::cos(M_PI * (1.0 - r));
    return std::cos(M_PI * r);
}

inline double tan_pi(double x) {
    double c = cos_pi(x);
    double s = sin_pi(x);
    return s / c; // +/-inf on an exact pole
}

// cos(pi z) and sin(pi z) for complex z with reduced real part.
inline std::complex<double> cos_pi(std::complex<double> z) {
    double re = detail::reduce_mod2(z.real());
    return std::cos(M_PI * std::complex<double>(re, z.imag()));
}

inline std::complex<double> sin_pi(std::complex<double> z) {
    double re = detail::reduce_mod2(z.real());
    return std::sin(M_PI * std::complex<double>(re, z.imag()));
}

} // namespace maryland

#endif
