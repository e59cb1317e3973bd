#ifndef MARYLAND_CLOSED_FORMS_HPP
#define MARYLAND_CLOSED_FORMS_HPP

#include "maryland/rational.hpp"

#include <map>

namespace maryland {

// Closed-form spectral curves of the model: the Lyapunov exponent
// gamma_lambda(e), the integrated density of states k_lambda(e), its
// inverse, and the Fourier data of the Cayley-transform phase zeta.

// gamma with 4 cosh gamma = sqrt((2+e)^2 + lambda^2) + sqrt((2-e)^2 + lambda^2),
// evaluated through a cancellation-safe arccosh.  Positive for every real e.
double lyapunov(double lambda, double e);

// k = 1/2 + arctan(e / (lambda tanh gamma)) / pi, strictly increasing in e
// with range (0,1).
double ids(double lambda, double e);

// Solves ids(lambda, e) = k_target by bracketing plus secant-accelerated
// bisection; the bracket starts at [-2-lambda, 2+lambda] and grows
// geometrically.  Throws target_out_of_range_error unless 0 < k_target < 1.
double ids_inverse(double lambda, double k_target, double tol = 1e-12);

struct ZetaCoefficients {
    double zeta0 = 0;                        // k - 1/2
    std::map<long long, double> zeta_n;      // n != 0, |n| <= n_max
    double gamma = 0;                        // decay rate used
    double k = 0;                            // IDS value used
    double at(long long n) const;            // 0 outside the computed range
};

// zeta_n = (-1)^n / (n pi) e^{-gamma|n|} sin(pi n k).
ZetaCoefficients zeta_coeffs(double lambda, double e, int n_max);

// Same but with the IDS value supplied as an exact rational (used when e
// comes from the quantization lattice, where sin(pi n k) hinges on exact
// cancellation mod 1).
ZetaCoefficients zeta_coeffs(double lambda, double e, const Rational& k_exact, int n_max);

// The branch of zeta(x) in (-1/2, 1/2) with q(x) = e^{-2 pi i zeta(x)},
// q(x) = -(2cos 2 pi x - e - i lambda)/(2cos 2 pi x - e + i lambda).
double zeta_function(double lambda, double e, double x);

} // namespace maryland

#endif
