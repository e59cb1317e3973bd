#include "maryland/spectral_report.hpp"

#include "maryland/closed_forms.hpp"
#include "maryland/errors.hpp"
#include "maryland/parallel.hpp"
#include "maryland/trig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maryland {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// gamma(e) = target on e > 0; gamma is strictly increasing there and
// unbounded, so plain bisection on a grown bracket is enough.
double boundary_energy(double lambda, double target, double tol) {
    double lo = 0.0, hi = 2.0 + lambda;
    while (lyapunov(lambda, hi) < target) hi *= 2.0;
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        double g = lyapunov(lambda, mid);
        if (std::fabs(g - target) <= tol) return mid;
        if (g < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool plus_infinity_sentinel(const IndexEstimate& est, double ceiling) {
    // trace above the ceiling at two consecutive computable levels
    int run = 0;
    for (double t : est.trace) {
        if (std::isnan(t) || t == -kInf) { run = 0; continue; }
        run = t > ceiling ? run + 1 : 0;
        if (run >= 2) return true;
    }
    return false;
}

} // namespace

SpectralVerdict classify(double lambda, const FrequencyCF& alpha, const Phase& theta,
                         const ClassifyOptions& opt) {
    if (!(lambda > 0)) throw validation_error("classify: lambda must be positive");
    SpectralVerdict v;
    int depth = std::min(opt.depth, alpha.declared_depth);
    v.delta_hat = delta_index(alpha, theta, depth, opt.window);
    v.gamma_at_zero = lyapunov(lambda, 0.0);
    v.ac_empty = true;

    if (plus_infinity_sentinel(v.delta_hat, opt.trace_ceiling)) {
        v.case_id = SpectralCase::SCEverywhere;
        v.delta_hat.value = kInf;
        v.sc_interval = std::make_pair(-kInf, kInf);
        v.pp_region = "empty";
        return v;
    }
    if (v.delta_hat.value <= v.gamma_at_zero) {
        v.case_id = SpectralCase::PPEverywhere;
        v.pp_region = "(-inf, inf)";
        return v;
    }
    v.case_id = SpectralCase::Mixed;
    double estar = boundary_energy(lambda, v.delta_hat.value, opt.root_tol);
    v.boundary_energies = std::make_pair(-estar, estar);
    v.sc_interval = std::make_pair(-estar, estar);
    v.pp_region = "|e| >= " + std::to_string(estar);
    return v;
}

double finite_volume_ids(double lambda, const FrequencyCF& alpha, const Phase& theta,
                         double e, long long N, const IdsOptions& opt) {
    if (N < 100) throw validation_error("finite_volume_ids: N must be >= 100");
    const Rational a = alpha.value();
    const long long size = 2 * N + 1;

    // site potentials once, with exact phase reduction
    std::vector<double> diag(static_cast<std::size_t>(size));
    Rational x = frac(theta.theta - static_cast<long>(N) * a);
    for (long long i = 0; i < size; ++i) {
        double xf = to_double(x);
        double c = cos_pi(xf);
        if (std::fabs(c) <= opt.singularity_guard)
            throw singularity_error(i - N, std::fabs(c),
                                    "finite_volume_ids: site " + std::to_string(i - N) +
                                        " inside the singularity guard; jitter theta");
        diag[static_cast<std::size_t>(i)] = lambda * (sin_pi(xf) / c);
        x = frac(x + a);
    }

    // Sturm sign count: d_i = (diag_i - e) - 1/d_{i-1}; negatives count
    // eigenvalues < e.  Rescale tiny pivots instead of dividing by zero.
    long long count = 0;
    double d = 1.0;
    for (long long i = 0; i < size; ++i) {
        double t = diag[static_cast<std::size_t>(i)] - e - (i > 0 ? 1.0 / d : 0.0);
        if (std::fabs(t) < 1e-300) t = std::copysign(1e-300, t == 0.0 ? -1.0 : t);
        if (t < 0) ++count;
        d = t;
    }
    return static_cast<double>(count) / static_cast<double>(size);
}

double theta_constancy_check(double lambda, const FrequencyCF& alpha, const Phase& theta1,
                             const Phase& theta2, const std::vector<double>& e_grid,
                             long long N, const IdsOptions& opt) {
    if (e_grid.empty()) throw validation_error("theta_constancy_check: empty grid");
    std::vector<double> dev(e_grid.size());
    parallel_for(0, static_cast<int>(e_grid.size()), opt.threads, [&](int i) {
        double a = finite_volume_ids(lambda, alpha, theta1, e_grid[static_cast<std::size_t>(i)], N, opt);
        double b = finite_volume_ids(lambda, alpha, theta2, e_grid[static_cast<std::size_t>(i)], N, opt);
        dev[static_cast<std::size_t>(i)] = std::fabs(a - b);
    });
    return *std::max_element(dev.begin(), dev.end());
}

} // namespace maryland
