#ifndef MARYLAND_EIGENSYSTEM_HPP
#define MARYLAND_EIGENSYSTEM_HPP

#include "maryland/arithmetics.hpp"
#include "maryland/closed_forms.hpp"

#include <complex>
#include <map>
#include <vector>

namespace maryland {

// Quantization-condition eigenvalue solver, small-divisor series for psi,
// explicit eigenfunction synthesis through the Cayley/Fourier transform,
// and the t_k / support-set diagnostics.

struct EigenRecord {
    double e = 0;             // eigenvalue candidate
    long long m = 0;          // label: k(e) = theta - 1/2 + m alpha (mod 1)
    Rational k_target;        // exact lattice value of the IDS at e
    double gamma = 0;
    double delta_hat = 0;
    bool predicted_pp = true; // gamma > delta_hat
    double residual = -1;     // filled by build_eigenfunction (-1: not built)
    double decay_rate = 0;    // fitted slope of ln|u_n|, only when built
};

struct EigenOptions {
    double tol = 1e-12;       // ids inversion tolerance
    int index_depth = 0;      // 0: deepest level the expansion supports
    int index_window = 5;
};

std::vector<EigenRecord> quantized_eigenvalues(double lambda, const FrequencyCF& alpha,
                                               const Phase& theta, long long m_lo,
                                               long long m_hi, const EigenOptions& opt = {});

struct PsiSeries {
    std::map<long long, std::complex<double>> coeffs; // k != 0
    int truncation = 0;
    double min_divisor = 0;          // smallest |e^{-2 pi i k alpha} - 1| met
    double target_decay = 0;         // certified rho: |psi_k| <= e^{-rho |k|}
    bool divisors_below_floor = false; // some divisor sank under the floor
                                       // but its zeta_k compensated
    bool drop_zero_mode = false;
    double at_real(double x) const;  // psi(x), real by conjugate symmetry
};

// Certified decay target used by the pipeline: rho = min(gamma/2, gamma - delta)/2.
// Nonpositive exactly when the localization hypothesis gamma > delta fails.
double default_target_decay(double gamma, double delta_hat);

// psi_k = zeta_k / (e^{-2 pi i k alpha} - 1) for 0 < |k| <= K.  Throws
// small_divisor_error(k) as soon as |psi_k| > e^{-rho |k|}, and with mode 0
// when no positive decay target exists at all (rho <= 0).
PsiSeries solve_cohomological(const ZetaCoefficients& zeta, const FrequencyCF& alpha, int K,
                              double divisor_floor, bool drop_zero_mode, double target_decay);

struct EigenfunctionDiagnostics {
    double unit_modulus_dev = 0; // max | |c_hat| - 1 | on the grid
    double growth_factor = 0;    // tridiagonal elimination multiplier bound
    double tail_ratio = 0;       // boundary |u| relative to peak |u|
    double pole_site_u = 0;      // max |u_n| at guarded pole sites (should vanish)
};

struct Eigenfunction {
    long long half_width = 0;              // N
    std::vector<std::complex<double>> u;   // index n + N, n in [-N, N]
    double residual = 0;                   // ||(h - e)u|| / ||u|| on [-N/2, N/2]
    double decay_rate = 0;                 // LSQ slope of ln|u_n| on N/4 <= |n| <= N/2
    EigenfunctionDiagnostics diag;
};

struct BuildOptions {
    double growth_bound = 1e8;  // ill_conditioned_error beyond this
    double pole_guard = 1e-12;  // |cos pi site| at/below this: Dirichlet site
};

// Samples c_hat(x) = e^{-2 pi i (m x + psi(x))}, inverts the Fourier series
// and solves (lambda + i e) u_n - i u_{n+1} - i u_{n-1} = lambda c_n with
// zero boundary on [-N, N].
Eigenfunction build_eigenfunction(double lambda, const FrequencyCF& alpha, const Phase& theta,
                                  const EigenRecord& record, const PsiSeries& psi,
                                  long long half_width, const BuildOptions& opt = {});

struct TkLevelReport {
    int n = 0;
    double max_dist_alpha = 0;    // sup over the block of ||t alpha|| (bound)
    double max_lattice_dist = 0;  // sup over the block of ||t (k - 1/2 - theta)|| (bound)
};

struct TkConditionReport {
    std::vector<double> partial_sums; // S_J over 0 < |j| <= J
    double tail_increment = 0;        // max increment over the last decade
    bool numerically_cauchy = false;  // tail increments below 1e-8
    std::vector<TkLevelReport> levels;
};

// zeta_override substitutes the Fourier data (the zero-coefficient edge
// case); by default the coefficients come from (lambda, e).
TkConditionReport check_tk_condition(double lambda, double e, const FrequencyCF& alpha,
                                     const Phase& theta, double t_decay, int K, int levels,
                                     const ZetaCoefficients* zeta_override = nullptr);

struct SupportTrace {
    std::vector<double> values; // ||q_n (k - theta - 1/2)||, n = 1..levels
    bool in_support = false;    // tail monotone-decreasing below 1e-3
};

SupportTrace support_membership(double lambda, const FrequencyCF& alpha, const Phase& theta,
                                double e, int levels);
SupportTrace support_membership(const FrequencyCF& alpha, const Phase& theta,
                                const Rational& k_exact, int levels);

} // namespace maryland

#endif
