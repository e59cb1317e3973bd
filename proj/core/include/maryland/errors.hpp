#ifndef MARYLAND_ERRORS_HPP
#define MARYLAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace maryland {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: rejected before any numerics run.  CLI exit code 2.
struct validation_error : error {
    using error::error;
};

// The frequency specification resolves to a rational number.
struct rational_input_error : validation_error {
    using validation_error::validation_error;
};

// The declared precision budget cannot certify the requested depth.
struct precision_exhausted_error : validation_error {
    using validation_error::validation_error;
};

// IDS inversion target outside (0,1).
struct target_out_of_range_error : validation_error {
    using validation_error::validation_error;
};

// Numeric breakdown while computing.  CLI exit code 3.
struct numeric_error : error {
    using error::error;
};

// Cohomological solve cannot certify the requested exponential decay.
struct small_divisor_error : numeric_error {
    small_divisor_error(long long mode, double psi_abs, double bound, std::string msg)
        : numeric_error(std::move(msg)), mode(mode), psi_abs(psi_abs), bound(bound) {}
    long long mode;   // offending Fourier index k (0: no positive decay target exists)
    double psi_abs;
    double bound;
};

// Tridiagonal solve growth monitor tripped.
struct ill_conditioned_error : numeric_error {
    using numeric_error::numeric_error;
};

// A cocycle step landed inside the singularity guard.  CLI exit code 4.
struct singularity_error : error {
    singularity_error(long long site, double cos_abs, std::string msg)
        : error(std::move(msg)), site(site), cos_abs(cos_abs) {}
    long long site;
    double cos_abs;
};

} // namespace maryland

#endif
