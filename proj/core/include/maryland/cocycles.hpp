#ifndef MARYLAND_COCYCLES_HPP
#define MARYLAND_COCYCLES_HPP

#include "maryland/arithmetics.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace maryland {

using cplx = std::complex<double>;

// 2x2 matrix with an accumulated log scale: the represented matrix is
// e^{log_scale} * entries.  Entries are renormalized by their largest
// absolute value after every multiplication, so products of length 10^6
// never leave double range.
struct CocycleMatrix {
    std::array<cplx, 4> m{cplx(1), cplx(0), cplx(0), cplx(1)}; // row-major
    double log_scale = 0.0;

    static CocycleMatrix identity() { return {}; }

    double entry_norm() const;   // max |entry|
    double frobenius() const;
    double op_norm() const;      // largest singular value
    double log_norm() const { return log_scale + std::log(op_norm()); }
    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }

    void renormalize();
    CocycleMatrix inverse() const;          // renormalized adjugate / det
    cplx apply_det() const;                 // de-scaled determinant e^{2 log_scale} det

    friend CocycleMatrix operator*(const CocycleMatrix& L, const CocycleMatrix& R);
    std::array<cplx, 2> operator*(const std::array<cplx, 2>& v) const; // de-scaled NOT applied
};

enum class CocycleKind { A, D };

struct CocycleOptions {
    double singularity_guard = 1e-12; // reject steps with |cos pi z| below this
    int resample_limit = 128;         // phase redraws in le_numeric
};

// One-step matrices at z = theta + i epsilon.
//   A(z) = [[e - lambda tan pi z, -1], [1, 0]]       (singular on the pole lattice)
//   D(z) = [[e cos pi z - lambda sin pi z, -cos pi z], [cos pi z, 0]]  (entire)
CocycleMatrix step_A(double lambda, double e, double theta_point, double epsilon = 0.0,
                     const CocycleOptions& opt = {});
CocycleMatrix step_D(double lambda, double e, double theta_point, double epsilon = 0.0);

// n-step product B(theta+(n-1)a) ... B(theta); negative n uses
// B_{-n}(theta) = B_n(theta - n a)^{-1}.
CocycleMatrix product(CocycleKind kind, double lambda, double e, double alpha,
                      double theta0, double epsilon, long long n,
                      const CocycleOptions& opt = {});

struct LEEstimate {
    double value = 0;
    long long steps = 0;
    int phase_samples = 0;
    double stderr_ = 0;              // spread of per-phase values / sqrt(samples)
    std::vector<double> per_phase;
};

// Birkhoff estimate of the Lyapunov exponent: averages log ||B_n(theta)|| / n
// over uniformly drawn phases, redrawing any phase whose orbit trips the
// singularity guard.
LEEstimate le_numeric(CocycleKind kind, double lambda, double e, double alpha,
                      double epsilon, long long n, int phase_samples,
                      std::uint64_t seed, const CocycleOptions& opt = {},
                      int threads = 1);

// integral_0^1 ln |cos pi (x + i eps)| dx by composite Gauss-Legendre with
// dyadic refinement into the x = 1/2 singularity (quad_points >= 64).
double i_epsilon(double epsilon, int quad_points = 512);

struct AccelSegment {
    double eps_lo = 0, eps_hi = 0;
    double le_lo = 0, le_hi = 0;
    double slope = 0;             // (dLE/deps) / (2 pi)
    double nearest_half_int = 0;
    double residual = 0;          // |slope - nearest_half_int|
};

// Per-interval slopes of the complexified LE over an increasing eps grid,
// divided by 2 pi, with the nearest half-integer and the residual.
std::vector<AccelSegment> acceleration(CocycleKind kind, double lambda, double e,
                                       double alpha, const std::vector<double>& eps_grid,
                                       long long n, int phase_samples, std::uint64_t seed,
                                       const CocycleOptions& opt = {}, int threads = 1);

// max{||B^2 x||, ||B x||, ||B^-1 x||} for real unimodular B and a unit
// vector x in C^2.  The classical bound is >= 1/4.
double gordon_three_point(const std::array<double, 4>& B, const std::array<cplx, 2>& x);

struct PerturbationReport {
    bool hypothesis_ok = false; // all window products within C e^{d l}
    bool holds = false;
    double lhs = 0, rhs = 0;
};

// Checks || prod (A^j + B^j) - prod A^j || <= C e^{dn} (prod (1 + C e^{-d} ||B^j||) - 1)
// on concrete sequences (operator norms).
PerturbationReport perturbation_bound_check(const std::vector<std::array<double, 4>>& A_seq,
                                            const std::vector<std::array<double, 4>>& B_seq,
                                            double C, double d);

struct CosProductReport {
    int level = 0;
    BigInt q;                  // q_n of the level
    long long min_site = 0;    // l0 realizing min |cos pi (theta + l a)|
    double sum_excl_min = 0;   // S = sum_{l != l0} ln|c_l| + (q_n - 1) ln 2
    double c_empirical = 0;    // |S| / ln q_n
    double prod_log = 0;       // sum over all j < q_n of ln |c_j|
    double bound_log = 0;      // (delta_hat - ln2 - eps) q_n - ln q_{n+1}
    bool product_bound_holds = false;
};

// Cosine-product diagnostics at one CF level (q_n <= 10^6).
CosProductReport cos_product_bound(const FrequencyCF& alpha, const Phase& theta,
                                   int level_index, double delta_hat, double epsilon);

struct PartialInverseReport {
    BigInt q;
    long long j0 = 0;          // argmin over j < q of |cos pi (theta + j a)|
    double log_norm = 0;       // ln || A_{j0}(theta - q a) ||
    double bound_log = 0;      // q (gamma + eps)
    double c_fit = 0;          // exp(log_norm - bound_log)
};

struct PeriodicApproxReport {
    BigInt q;                   // q~ of the level
    double log_norm = 0;        // ln || A_q(theta) ||
    double log_diff = 0;        // ln || A_q(theta) - A_q(theta - q~ a) ||
    double log_diff_control = 0;// same under a decorrelating shift 1/(2 q~)
    double decay_log = 0;       // -(delta - gamma - eps) q~
    double floor_log = 0;       // double-roundoff floor of the comparison
    bool near_periodic = false; // log_diff <= max(decay_log, floor_log) + slack
};

// Near-periodicity of the transfer matrix under the q~ alpha shift, the
// quantitative engine of the recurrence argument: the difference of the two
// q~-step products is compared against the e^{-(delta - gamma - eps) q~}
// decay (or the double-precision floor once ||q~ alpha|| is below it) and
// against a control shift that decorrelates the orbit.
PeriodicApproxReport periodic_approximation_check(double lambda, double e,
                                                  const FrequencyCF& alpha, const Phase& theta,
                                                  int level_index, double delta_hat,
                                                  double epsilon_margin,
                                                  const CocycleOptions& opt = {});

PartialInverseReport partial_inverse_norm_check(double lambda, double e,
                                                const FrequencyCF& alpha, const Phase& theta,
                                                int level_index, double epsilon_margin,
                                                const CocycleOptions& opt = {});

// Operator 2-norm of a real 2x2 matrix.
double op_norm(const std::array<double, 4>& M);

} // namespace maryland

#endif
