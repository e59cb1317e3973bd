#include "maryland/closed_forms.hpp"

#include "maryland/errors.hpp"
#include "maryland/trig.hpp"

#include <cassert>
#include <cmath>

namespace maryland {

double lyapunov(double lambda, double e) {
    if (!(lambda > 0)) throw validation_error("lyapunov: lambda must be positive");
    double c = 0.25 * (std::hypot(2.0 + e, lambda) + std::hypot(2.0 - e, lambda));
    // c >= sqrt(4 + lambda^2)/2 > 1, so the arccosh argument never degenerates,
    // but the (c-1)(c+1) form avoids losing digits when lambda is small and e ~ 0.
    return std::log(c + std::sqrt((c - 1.0) * (c + 1.0)));
}

double ids(double lambda, double e) {
    if (!(lambda > 0)) throw validation_error("ids: lambda must be positive");
    // Writing the dominant transfer-matrix eigenvalue as e^{gamma + i phi},
    // matching real and imaginary parts of mu + 1/mu = e - i lambda gives
    // 2 cosh(gamma) cos(phi) = e and 2 sinh(gamma) sin(phi) = -lambda, so the
    // IDS k = 1 + phi/pi satisfies tan(pi(k - 1/2)) = (e/lambda) tanh(gamma).
    double g = lyapunov(lambda, e);
    return 0.5 + std::atan(e * std::tanh(g) / lambda) / M_PI;
}

double ids_inverse(double lambda, double k_target, double tol) {
    if (!(lambda > 0)) throw validation_error("ids_inverse: lambda must be positive");
    if (!(k_target > 0.0 && k_target < 1.0))
        throw target_out_of_range_error("ids_inverse: k_target must lie in (0,1)");
    if (!(tol > 0)) throw validation_error("ids_inverse: tol must be positive");

    double lo = -2.0 - lambda, hi = 2.0 + lambda;
    while (ids(lambda, lo) > k_target) lo *= 2.0;
    while (ids(lambda, hi) < k_target) hi *= 2.0;

    // Iterate past the k tolerance until the bracket collapses in e as
    // well, so the inverse round-trips in energy units and not just in k.
    // Secant steps alternate with plain bisection, which kills the
    // one-sided regula-falsi stall and keeps convergence unconditional.
    double flo = ids(lambda, lo) - k_target;
    double fhi = ids(lambda, hi) - k_target;
    double e = 0.5 * (lo + hi), fbest = 1.0;
    for (int it = 0; it < 400; ++it) {
        double es = (it % 2 == 0 && std::fabs(fhi - flo) > 0)
                        ? lo - flo * (hi - lo) / (fhi - flo)
                        : 0.5 * (lo + hi);
        e = (es > lo && es < hi) ? es : 0.5 * (lo + hi);
        double f = ids(lambda, e) - k_target;
        fbest = std::fabs(f);
        bool converged_k = fbest <= tol;
        bool converged_e = (hi - lo) <= 1e-13 * std::max(1.0, std::fabs(e));
        if (converged_k && (converged_e || f == 0.0)) return e;
        if (f < 0) { lo = e; flo = f; } else { hi = e; fhi = f; }
        if (hi - lo < 1e-300) break;
    }
    if (fbest > tol)
        throw numeric_error("ids_inverse: failed to reach tolerance");
    return e;
}

double ZetaCoefficients::at(long long n) const {
    if (n == 0) return zeta0;
    auto it = zeta_n.find(n);
    return it == zeta_n.end() ? 0.0 : it->second;
}

namespace {

ZetaCoefficients build_zeta(double lambda, double e, int n_max,
                            const Rational* k_exact) {
    if (n_max < 1) throw validation_error("zeta_coeffs: n_max must be >= 1");
    ZetaCoefficients z;
    z.gamma = lyapunov(lambda, e);
    z.k = k_exact ? to_double(*k_exact) : ids(lambda, e);
    z.zeta0 = z.k - 0.5;
    for (long long n = 1; n <= n_max; ++n) {
        double s;
        if (k_exact) {
            // sin(pi n k) with the fractional part of n*k reduced exactly;
            // for lattice k the near-cancellation mod 1 is the whole point.
            Rational nk = Rational(static_cast<long>(n)) * (*k_exact);
            BigInt fl;
            mpz_fdiv_q(fl.get_mpz_t(), nk.get_num().get_mpz_t(), nk.get_den().get_mpz_t());
            // reduce mod 2 to keep the sign of the sine
            BigInt fl2 = fl - (fl % 2 + 2) % 2;
            s = sin_pi(to_double(nk - Rational(fl2)));
        } else {
            s = sin_pi(static_cast<double>(n) * z.k);
        }
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        double v = sign / (static_cast<double>(n) * M_PI) *
                   std::exp(-z.gamma * static_cast<double>(n)) * s;
        z.zeta_n[n] = v;
        z.zeta_n[-n] = v; // zeta is real-valued, coefficients are even in n
    }
    return z;
}

} // namespace

ZetaCoefficients zeta_coeffs(double lambda, double e, int n_max) {
    return build_zeta(lambda, e, n_max, nullptr);
}

ZetaCoefficients zeta_coeffs(double lambda, double e, const Rational& k_exact, int n_max) {
    return build_zeta(lambda, e, n_max, &k_exact);
}

double zeta_function(double lambda, double e, double x) {
    if (!(lambda > 0)) throw validation_error("zeta_function: lambda must be positive");
    double w = 2.0 * cos_pi(2.0 * x) - e;
    // q = -(w - i lambda)/(w + i lambda) is unimodular; with phi = arg(w + i lambda)
    // in (0, pi) the branch in (-1/2, 1/2) is phi/pi - 1/2.
    double phi = std::atan2(lambda, w);
    double zeta = phi / M_PI - 0.5;
    assert(zeta > -0.5 && zeta < 0.5);
    return zeta;
}

} // namespace maryland
