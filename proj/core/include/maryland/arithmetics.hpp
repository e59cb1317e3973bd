#ifndef MARYLAND_ARITHMETICS_HPP
#define MARYLAND_ARITHMETICS_HPP

#include "maryland/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace maryland {

// ---------------------------------------------------------------------------
// Continued-fraction machinery for the frequency alpha, the arithmetic
// indices delta(alpha,theta) and beta(alpha), the t_k block sequence and the
// localized-phase generator.
//
// alpha is normalized into (0,1) and represented by its CF terms a_1,a_2,...
// held exactly as big integers together with the convergents p_n/q_n
// (seed p_0=0, q_0=1).  Generated Liouville frequencies keep terms exact
// only while they fit a bit-size cap; deeper levels are carried in log
// space ("virtual" levels) which is enough for the beta trace and for the
// ln q_{n+1} piece of the delta trace at the last exact level.
// ---------------------------------------------------------------------------

enum class FrequencySource { NamedConstant, DecimalWithPrecision, ExplicitTerms, Generated };

struct FrequencyCF {
    std::vector<BigInt> terms;     // a_1 .. a_K (exact levels only)
    std::vector<BigInt> p, q;      // convergents, index 0..K
    int declared_depth = 0;        // requested depth incl. virtual levels
    double gen_rate = 0.0;         // b of a_{n+1} = ceil(e^{b q_n}); 0 if none
    bool has_virtual_tail = false; // true when declared_depth > exact levels
    FrequencySource source = FrequencySource::NamedConstant;
    std::string spec;              // original specification string

    int exact_levels() const { return static_cast<int>(terms.size()); }

    // ln q_n; valid for n <= exact_levels()+1 when a virtual tail exists
    // (may overflow to +inf for generated tails, which is fine: callers
    // only ever divide by it).
    double log_q(int n) const;

    // Best available rational value of alpha (deepest exact convergent).
    Rational value() const;
    double value_d() const { return to_double(value()); }

    // ||q_n alpha|| as an exact rational, n <= exact_levels()-1; at the
    // deepest exact level the CF tail is unknown so the exact value is
    // replaced by the interval midpoint of (1/(q_n+q_{n+1}), 1/q_{n+1}).
    Rational dist_qn_alpha(int n) const;
};

struct FrequencyOptions {
    // Generated CF terms larger than this many bits become virtual levels.
    std::size_t term_bit_cap = std::size_t{1} << 20;
};

// Parse + expand a frequency specification:
//   golden | sqrt2m1 | cf:[a1,a2,...] | cfgen:exp:<b>:<levels> |
//   dec:<digits>@<precision-bits> | <p>/<q> (always rejected as rational)
FrequencyCF cf_expand(const std::string& alpha_spec, int depth,
                      const FrequencyOptions& opt = {});

// min over integers l of |x - l|.
double dist_to_Z(double x);
Rational dist_to_Z(const Rational& x);

// ---------------------------------------------------------------------------
// Phases.  theta is kept as an exact rational in [0,1); validity means
// theta stays away from the excluded lattice 1/2 + alpha Z + Z on a
// scanned window of lattice indices.
// ---------------------------------------------------------------------------

struct Phase {
    Rational theta;          // in [0,1)
    double exclusion_margin; // min_{|m|<=window} ||theta - 1/2 - m alpha||
    int scan_window;
};

// Builds a Phase and computes the exclusion margin; throws validation_error
// if the margin vanishes (theta exactly on the excluded lattice).
Phase make_phase(const Rational& theta, const FrequencyCF& alpha, int scan_window = 64);

// ---------------------------------------------------------------------------
// Index estimates.  The limsup is reported honestly as a max over a tail
// window of the finite trace, never as a converged limit.  Exact zeros of
// ||q_n(theta-1/2)|| enter the trace as -inf sentinels and are excluded
// from the max; levels where the data is not computable (virtual q_n) are
// NaN and likewise excluded.
// ---------------------------------------------------------------------------

struct IndexEstimate {
    double value = 0.0;          // max over the tail window (+/-inf possible)
    int depth = 0;
    int window = 0;
    std::vector<double> trace;   // trace[n-1] = level-n entry, n = 1..depth
};

IndexEstimate delta_index(const FrequencyCF& alpha, const Phase& theta,
                          int depth, int window = 5);
IndexEstimate beta_index(const FrequencyCF& alpha, int depth, int window = 5);

// ---------------------------------------------------------------------------
// t_k block sequence {q_n, 2 q_n, ..., l_n q_n} with
//   l_n = min( floor(q_n^2 / ||q_n k||), floor(2 q_{n+1} / q_n) ),
// clamped to l_n >= 1; ||q_n k|| = 0 selects the second branch alone.
// Block lengths can be astronomically large for Liouville alpha, so the
// sequence is returned per level and flattened on demand.
// ---------------------------------------------------------------------------

struct TkLevel {
    int n;                  // CF level
    BigInt q;               // q_n
    BigInt block_length;    // l_n
    Rational dist_qn_k;     // ||q_n k||, exact
    double max_dist_alpha;  // upper bound for ||t alpha|| over the block
};

struct TkSequence {
    std::vector<TkLevel> levels;
    // First max_elements entries of the concatenated sequence.
    std::vector<BigInt> flatten(std::size_t max_elements = 4096) const;
};

TkSequence build_tk(const FrequencyCF& alpha, const Rational& k_of_e, int depth);

// Single-level block length; exposed for direct checks against the
// defining arithmetic.
BigInt tk_block_length(const BigInt& q_n, const std::optional<BigInt>& q_next,
                       const Rational& dist_qn_k);

// ---------------------------------------------------------------------------
// Localized-phase generator: produces theta with ||q_n(theta-1/2)|| <
// 10 q_n/q_{n+1} at every exact level (and <= 1/q_{n+1} in fact, so the
// finite delta trace is <= 0).  theta = 1/2 +/- p'/q' where p'/q' is the
// deepest exact convergent, optionally of a seed-extended CF; the seed
// selects sign and extension.
// ---------------------------------------------------------------------------

Phase localized_phase(const FrequencyCF& alpha, int depth, std::uint64_t seed);

} // namespace maryland

#endif
