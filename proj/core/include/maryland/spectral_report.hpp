#ifndef MARYLAND_SPECTRAL_REPORT_HPP
#define MARYLAND_SPECTRAL_REPORT_HPP

#include "maryland/arithmetics.hpp"
#include "maryland/cocycles.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace maryland {

// Top-level classifier: delta-hat vs gamma trichotomy, boundary energies,
// finite-volume IDS cross-validation and the phase-constancy witness.

enum class SpectralCase {
    SCEverywhere = 1, // delta = +inf sentinel: purely singular continuous
    Mixed = 2,        // gamma(0) < delta < inf: sc on [-e*, e*], pp outside
    PPEverywhere = 3  // delta <= gamma(0): pure point on the whole line
};

struct SpectralVerdict {
    SpectralCase case_id = SpectralCase::PPEverywhere;
    IndexEstimate delta_hat;
    double gamma_at_zero = 0;
    std::optional<std::pair<double, double>> boundary_energies; // (-e*, +e*)
    std::optional<std::pair<double, double>> sc_interval;       // [-e*, e*]
    std::string pp_region;   // textual description of the pp set
    bool ac_empty = true;    // always: no absolutely continuous component
};

struct ClassifyOptions {
    int depth = 20;
    int window = 5;
    double trace_ceiling = 1e3;  // +inf sentinel: trace above this at two
                                 // consecutive computable levels
    double root_tol = 1e-9;      // |gamma(e*) - delta| tolerance
};

SpectralVerdict classify(double lambda, const FrequencyCF& alpha, const Phase& theta,
                         const ClassifyOptions& opt = {});

struct IdsOptions {
    double singularity_guard = 1e-12;
    int threads = 1;
};

// Eigenvalue-counting IDS of the operator truncated to [-N, N] with zero
// boundary: Sturm sign counts on the symmetric tridiagonal matrix, no
// eigenvectors.  Throws singularity_error if a site falls inside the guard
// (shifting theta by a small jitter is the usual remedy).
double finite_volume_ids(double lambda, const FrequencyCF& alpha, const Phase& theta,
                         double e, long long N, const IdsOptions& opt = {});

// max over the grid of |finite_volume_ids(theta1) - finite_volume_ids(theta2)|.
double theta_constancy_check(double lambda, const FrequencyCF& alpha, const Phase& theta1,
                             const Phase& theta2, const std::vector<double>& e_grid,
                             long long N, const IdsOptions& opt = {});

} // namespace maryland

#endif
