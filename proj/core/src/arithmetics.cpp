#include "maryland/arithmetics.hpp"

#include "maryland/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace maryland {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void push_convergent(FrequencyCF& cf, const BigInt& a) {
    const std::size_t n = cf.p.size(); // index of the new convergent
    BigInt pn = a * cf.p[n - 1] + (n >= 2 ? cf.p[n - 2] : BigInt(1));
    BigInt qn = a * cf.q[n - 1] + (n >= 2 ? cf.q[n - 2] : BigInt(0));
    cf.terms.push_back(a);
    cf.p.push_back(pn);
    cf.q.push_back(qn);
}

void seed_convergents(FrequencyCF& cf) {
    cf.p.assign(1, BigInt(0));
    cf.q.assign(1, BigInt(1));
}

// ceil(e^{b*qn}) if it fits in bit_cap bits.
bool ceil_exp_term(double b, const BigInt& qn, std::size_t bit_cap, BigInt& out) {
    double qd = to_double(qn);
    double need_bits = b * qd * 1.4426950408889634 + 8.0;
    if (!(need_bits < static_cast<double>(bit_cap))) return false;
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(need_bits) + 64;
    mpfr_t x;
    mpfr_init2(x, prec);
    mpfr_set_z(x, qn.get_mpz_t(), MPFR_RNDN);
    mpfr_mul_d(x, x, b, MPFR_RNDN);
    mpfr_exp(x, x, MPFR_RNDN);
    mpfr_ceil(x, x);
    mpfr_get_z(out.get_mpz_t(), x, MPFR_RNDN);
    mpfr_clear(x);
    return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

FrequencyCF expand_named(const std::string& spec, unsigned long term, int depth) {
    FrequencyCF cf;
    cf.source = FrequencySource::NamedConstant;
    cf.spec = spec;
    cf.declared_depth = depth;
    seed_convergents(cf);
    for (int n = 1; n <= depth; ++n) push_convergent(cf, BigInt(term));
    return cf;
}

FrequencyCF expand_explicit(const std::string& spec, const std::string& list, int depth) {
    FrequencyCF cf;
    cf.source = FrequencySource::ExplicitTerms;
    cf.spec = spec;
    seed_convergents(cf);
    if (list.size() < 2 || list.front() != '[' || list.back() != ']')
        throw validation_error("cf: expects a bracketed term list, got " + list);
    auto items = split(list.substr(1, list.size() - 2), ',');
    if (static_cast<int>(items.size()) < depth)
        throw precision_exhausted_error("cf: provides " + std::to_string(items.size()) +
                                        " terms, depth " + std::to_string(depth) + " requested");
    for (int n = 0; n < depth; ++n) {
        BigInt a;
        try {
            a = BigInt(items[n], 10);
        } catch (...) {
            throw validation_error("cf: bad term '" + items[n] + "'");
        }
        if (a < 1) throw validation_error("cf: terms must be positive");
        push_convergent(cf, a);
    }
    cf.declared_depth = depth;
    return cf;
}

FrequencyCF expand_generated(const std::string& spec, double rate, int levels, int depth,
                             const FrequencyOptions& opt) {
    if (!(rate > 0)) throw validation_error("cfgen:exp rate must be positive");
    if (levels < 1) throw validation_error("cfgen:exp needs at least one level");
    if (depth > levels)
        throw precision_exhausted_error("cfgen declares " + std::to_string(levels) +
                                        " levels, depth " + std::to_string(depth) + " requested");
    FrequencyCF cf;
    cf.source = FrequencySource::Generated;
    cf.spec = spec;
    cf.gen_rate = rate;
    cf.declared_depth = depth;
    seed_convergents(cf);
    for (int n = 1; n <= depth; ++n) {
        BigInt a;
        if (!ceil_exp_term(rate, cf.q.back(), opt.term_bit_cap, a)) {
            cf.has_virtual_tail = true;
            break;
        }
        push_convergent(cf, a);
    }
    if (cf.terms.empty())
        throw precision_exhausted_error("cfgen: first term already exceeds the bit cap");
    return cf;
}

// Certified CF prefix of every number in [lo, hi] (0 < lo <= hi < 1).
FrequencyCF expand_decimal(const std::string& spec, const Rational& value, long bits, int depth) {
    BigInt two = 2, pw;
    mpz_pow_ui(pw.get_mpz_t(), two.get_mpz_t(), static_cast<unsigned long>(bits));
    Rational u = Rational(1) / Rational(pw); // declared half-width 2^-bits
    Rational x = frac(value);
    Rational lo = x - u, hi = x + u;
    if (lo <= 0 || hi >= 1)
        throw precision_exhausted_error("dec: value with its uncertainty leaves (0,1)");

    FrequencyCF cf;
    cf.source = FrequencySource::DecimalWithPrecision;
    cf.spec = spec;
    seed_convergents(cf);
    for (int n = 1; n <= depth; ++n) {
        if (lo == 0 || hi == 0) break; // an endpoint's CF terminated
        Rational rlo = 1 / hi, rhi = 1 / lo;
        BigInt flo, fhi;
        mpz_fdiv_q(flo.get_mpz_t(), rlo.get_num().get_mpz_t(), rlo.get_den().get_mpz_t());
        mpz_fdiv_q(fhi.get_mpz_t(), rhi.get_num().get_mpz_t(), rhi.get_den().get_mpz_t());
        if (flo != fhi) break; // interval straddles a CF cell boundary
        push_convergent(cf, flo);
        Rational nlo = rlo - Rational(flo), nhi = rhi - Rational(fhi);
        lo = nlo;
        hi = nhi;
    }
    if (static_cast<int>(cf.terms.size()) < depth)
        throw precision_exhausted_error(
            "dec: certified only " + std::to_string(cf.terms.size()) + " of " +
            std::to_string(depth) + " terms at the declared precision");
    cf.declared_depth = depth;
    return cf;
}

} // namespace

double FrequencyCF::log_q(int n) const {
    const int K = exact_levels();
    if (n >= 0 && n <= K) return log_bigint(q[static_cast<std::size_t>(n)]);
    if (has_virtual_tail && n <= declared_depth + 1) {
        if (n == K + 1) return gen_rate * to_double(q[static_cast<std::size_t>(K)]) + log_bigint(q[static_cast<std::size_t>(K)]);
        return kInf; // deeper than one virtual level: ln q overflows any float
    }
    throw validation_error("log_q: level " + std::to_string(n) + " not available");
}

Rational FrequencyCF::value() const {
    const int K = exact_levels();
    if (K < 1) throw validation_error("frequency has no expanded terms");
    return Rational(p[static_cast<std::size_t>(K)], q[static_cast<std::size_t>(K)]);
}

Rational FrequencyCF::dist_qn_alpha(int n) const {
    const int K = exact_levels();
    if (n < 0 || n > K - 1)
        throw validation_error("dist_qn_alpha: exact value needs level below the deepest");
    // ||q_n alpha|| for the deepest-convergent alpha; exact continuant value.
    return dist_to_int(Rational(q[static_cast<std::size_t>(n)] * p[static_cast<std::size_t>(K)],
                                q[static_cast<std::size_t>(K)]));
}

FrequencyCF cf_expand(const std::string& alpha_spec, int depth, const FrequencyOptions& opt) {
    if (depth < 1) throw validation_error("depth must be >= 1");
    if (alpha_spec == "golden") return expand_named(alpha_spec, 1, depth);
    if (alpha_spec == "sqrt2m1") return expand_named(alpha_spec, 2, depth);
    if (alpha_spec.rfind("cf:", 0) == 0)
        return expand_explicit(alpha_spec, alpha_spec.substr(3), depth);
    if (alpha_spec.rfind("cfgen:exp:", 0) == 0) {
        auto parts = split(alpha_spec, ':');
        if (parts.size() != 4) throw validation_error("expected cfgen:exp:<b>:<levels>");
        double rate = 0;
        int levels = 0;
        try {
            rate = std::stod(parts[2]);
            levels = std::stoi(parts[3]);
        } catch (...) {
            throw validation_error("bad cfgen parameters in " + alpha_spec);
        }
        return expand_generated(alpha_spec, rate, levels, depth, opt);
    }
    if (alpha_spec.rfind("dec:", 0) == 0) {
        auto at = alpha_spec.find('@');
        if (at == std::string::npos)
            throw validation_error("expected dec:<digits>@<precision-bits>");
        Rational v = rational_from_decimal(alpha_spec.substr(4, at - 4));
        long bits = 0;
        try {
            bits = std::stol(alpha_spec.substr(at + 1));
        } catch (...) {
            throw validation_error("bad precision in " + alpha_spec);
        }
        if (bits < 4) throw validation_error("precision budget too small");
        return expand_decimal(alpha_spec, v, bits, depth);
    }
    if (alpha_spec.find('/') != std::string::npos) {
        try {
            Rational r(alpha_spec, 10);
            r.canonicalize();
            throw rational_input_error("frequency " + alpha_spec +
                                       " is rational: its continued fraction terminates");
        } catch (rational_input_error&) {
            throw;
        } catch (...) {
            throw validation_error("unrecognized frequency spec: " + alpha_spec);
        }
    }
    throw validation_error("unrecognized frequency spec: " + alpha_spec);
}

double dist_to_Z(double x) {
    double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

Rational dist_to_Z(const Rational& x) { return dist_to_int(x); }

Phase make_phase(const Rational& theta_in, const FrequencyCF& alpha, int scan_window) {
    Phase ph;
    ph.theta = frac(theta_in);
    ph.scan_window = scan_window;
    Rational half(1, 2);
    if (ph.theta == half)
        throw validation_error("theta = 1/2: potential undefined at site 0");
    // For rational theta the excluded lattice 1/2 + alpha Z + Z is met only
    // at m = 0, so validity is exactly theta != 1/2.  The margin scan below
    // is diagnostic; an exact zero at m != 0 only flags that the rational
    // alpha-approximant resolution was reached, and is replaced by the
    // approximant error bound.
    const Rational a = alpha.value();
    Rational best = dist_to_int(ph.theta - half);
    double best_d = to_double(best);
    const int K = alpha.exact_levels();
    for (int m = 1; m <= scan_window; ++m) {
        for (int s : {-1, 1}) {
            Rational d = dist_to_int(ph.theta - half - s * m * a);
            if (d == 0) {
                // Hit the alpha-approximant lattice exactly: the true margin
                // is ~ m * ||q_K alpha||, not zero.
                double approx_err = static_cast<double>(m) * std::exp(-2.0 * alpha.log_q(K));
                best_d = std::min(best_d, std::max(approx_err, 1e-300));
            } else {
                best_d = std::min(best_d, to_double(d));
            }
        }
    }
    ph.exclusion_margin = std::max(best_d, 5e-324);
    return ph;
}

namespace {

// ln || q_n (theta - 1/2) ||, exact; -inf when the distance is exactly 0.
double log_dist_qn_phase(const BigInt& qn, const Rational& theta) {
    Rational d = dist_to_int(Rational(qn) * (theta - Rational(1, 2)));
    if (d == 0) return -kInf;
    return log_rational(d);
}

double window_max(const std::vector<double>& trace, int depth, int window) {
    window = std::clamp(window, 1, depth);
    double best = -kInf;
    for (int n = depth - window + 1; n <= depth; ++n) {
        double t = trace[static_cast<std::size_t>(n - 1)];
        if (std::isnan(t)) continue;   // level not computable (virtual q_n)
        if (t == -kInf) continue;      // exact-zero sentinel, limsup ignores it
        best = std::max(best, t);
    }
    return best;
}

} // namespace

IndexEstimate delta_index(const FrequencyCF& alpha, const Phase& theta, int depth, int window) {
    const int K = alpha.exact_levels();
    if (depth < 1) throw validation_error("delta_index: depth must be >= 1");
    if (depth > alpha.declared_depth)
        throw validation_error("delta_index: depth exceeds expanded frequency depth");
    IndexEstimate est;
    est.depth = depth;
    est.window = std::clamp(window, 1, depth);
    est.trace.assign(static_cast<std::size_t>(depth), kNaN);
    for (int n = 1; n <= depth; ++n) {
        double t = kNaN;
        if (n <= K - 1) {
            double ld = log_dist_qn_phase(alpha.q[static_cast<std::size_t>(n)], theta.theta);
            t = (ld == -kInf) ? -kInf
                              : (ld + log_bigint(alpha.q[static_cast<std::size_t>(n + 1)])) /
                                    to_double(alpha.q[static_cast<std::size_t>(n)]);
        } else if (n == K) {
            double ld = log_dist_qn_phase(alpha.q[static_cast<std::size_t>(n)], theta.theta);
            if (ld == -kInf) {
                t = -kInf;
            } else if (alpha.has_virtual_tail) {
                // ln q_{K+1} = gen_rate*q_K + ln q_K up to a negligible term;
                // keep the decomposed form so nothing overflows.
                double qd = to_double(alpha.q[static_cast<std::size_t>(K)]);
                t = alpha.gen_rate + (log_bigint(alpha.q[static_cast<std::size_t>(K)]) + ld) / qd;
            }
            // else: q_{K+1} unknown, level stays NaN
        }
        est.trace[static_cast<std::size_t>(n - 1)] = t;
    }
    est.value = window_max(est.trace, depth, est.window);
    return est;
}

IndexEstimate beta_index(const FrequencyCF& alpha, int depth, int window) {
    if (depth < 2) throw validation_error("beta_index: depth must be >= 2");
    if (depth > alpha.declared_depth)
        throw validation_error("beta_index: depth exceeds expanded frequency depth");
    const int K = alpha.exact_levels();
    IndexEstimate est;
    est.depth = depth;
    est.window = std::clamp(window, 1, depth);
    est.trace.assign(static_cast<std::size_t>(depth), kNaN);
    for (int n = 1; n <= depth; ++n) {
        double t = kNaN;
        if (n <= K - 1) {
            t = log_bigint(alpha.q[static_cast<std::size_t>(n + 1)]) /
                to_double(alpha.q[static_cast<std::size_t>(n)]);
        } else if (alpha.has_virtual_tail) {
            if (n == K) {
                double qd = to_double(alpha.q[static_cast<std::size_t>(K)]);
                t = alpha.gen_rate + log_bigint(alpha.q[static_cast<std::size_t>(K)]) / qd;
            } else if (n == K + 1) {
                double lq = alpha.log_q(K + 1); // may be inf; term below then vanishes
                t = alpha.gen_rate + (std::isfinite(lq) ? lq * std::exp(-lq) : 0.0);
            } else {
                t = alpha.gen_rate; // ln q_n / q_n is below double resolution here
            }
        }
        est.trace[static_cast<std::size_t>(n - 1)] = t;
    }
    est.value = window_max(est.trace, depth, est.window);
    return est;
}

BigInt tk_block_length(const BigInt& q_n, const std::optional<BigInt>& q_next,
                       const Rational& dist_qn_k) {
    BigInt by_ratio;  // floor(2 q_{n+1} / q_n)
    bool have_ratio = false;
    if (q_next) {
        mpz_fdiv_q(by_ratio.get_mpz_t(), BigInt(2 * *q_next).get_mpz_t(), q_n.get_mpz_t());
        have_ratio = true;
    }
    if (dist_qn_k == 0) { // first branch is +inf
        if (!have_ratio) return BigInt(1);
        return std::max(by_ratio, BigInt(1));
    }
    // floor(q_n^2 / ||q_n k||) in exact arithmetic
    Rational r = Rational(q_n * q_n) / dist_qn_k;
    BigInt by_divisor;
    mpz_fdiv_q(by_divisor.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    BigInt l = have_ratio ? std::min(by_divisor, by_ratio) : by_divisor;
    return std::max(l, BigInt(1));
}

TkSequence build_tk(const FrequencyCF& alpha, const Rational& k_of_e, int depth) {
    const int K = alpha.exact_levels();
    const int top = std::min(depth, K);
    TkSequence seq;
    for (int n = 1; n <= top; ++n) {
        TkLevel lv;
        lv.n = n;
        lv.q = alpha.q[static_cast<std::size_t>(n)];
        lv.dist_qn_k = dist_to_int(Rational(lv.q) * k_of_e);
        std::optional<BigInt> qnext;
        if (n + 1 <= K) qnext = alpha.q[static_cast<std::size_t>(n + 1)];
        lv.block_length = tk_block_length(lv.q, qnext, lv.dist_qn_k);
        double da;
        if (n <= K - 1) da = to_double(alpha.dist_qn_alpha(n));
        else if (alpha.has_virtual_tail) da = std::exp(-alpha.log_q(K + 1)); // <= 1/q_{K+1}
        else da = K >= 2 ? to_double(alpha.dist_qn_alpha(K - 1)) : 0.5;  // ||q_n a|| decreasing in n
        lv.max_dist_alpha = std::min(0.5, to_double(lv.block_length) * da);
        seq.levels.push_back(std::move(lv));
    }
    return seq;
}

std::vector<BigInt> TkSequence::flatten(std::size_t max_elements) const {
    std::vector<BigInt> out;
    for (const auto& lv : levels) {
        BigInt t = lv.q;
        for (BigInt i = 1; i <= lv.block_length; ++i) {
            if (out.size() >= max_elements) return out;
            out.push_back(t);
            t += lv.q;
        }
    }
    return out;
}

Phase localized_phase(const FrequencyCF& alpha, int depth, std::uint64_t seed) {
    if (depth < 3) throw validation_error("localized_phase: depth must be >= 3");
    const int K = alpha.exact_levels();
    const int d = std::min(depth, K);
    if (d < 1) throw validation_error("localized_phase: no exact convergents available");

    const int sign = (seed & 1) ? -1 : 1;
    BigInt pp = alpha.p[static_cast<std::size_t>(d)];
    BigInt qq = alpha.q[static_cast<std::size_t>(d)];

    if (d < K) {
        // The next true term is known, so the convergent can be seed-extended:
        // append r terms, the first at least a_{d+1} so every finite trace
        // level through d stays <= 0.
        int r = 1 + static_cast<int>((seed >> 1) & 1);
        BigInt b1 = alpha.terms[static_cast<std::size_t>(d)] + BigInt(static_cast<unsigned long>((seed >> 2) & 7));
        BigInt pm1 = alpha.p[static_cast<std::size_t>(d - 1)];
        BigInt qm1 = alpha.q[static_cast<std::size_t>(d - 1)];
        BigInt np = b1 * pp + pm1, nq = b1 * qq + qm1;
        pm1 = pp; qm1 = qq; pp = np; qq = nq;
        for (int i = 1; i < r; ++i) {
            BigInt bi = 1 + BigInt(static_cast<unsigned long>((seed >> (5 + 3 * i)) & 7));
            np = bi * pp + pm1;
            nq = bi * qq + qm1;
            pm1 = pp; qm1 = qq; pp = np; qq = nq;
        }
    }
    Rational theta = frac(Rational(1, 2) + sign * Rational(pp, qq));
    return make_phase(theta, alpha);
}

} // namespace maryland
