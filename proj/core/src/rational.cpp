#include "maryland/rational.hpp"

#include "maryland/errors.hpp"

#include <cctype>
#include <limits>

namespace maryland {

Rational frac(const Rational& x) {
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    Rational r = x - Rational(fl);
    r.canonicalize();
    return r;
}

Rational dist_to_int(const Rational& x) {
    Rational f = frac(x);
    Rational other = 1 - f;
    return f <= other ? f : other;
}

double log_bigint(const BigInt& n) {
    signed long exp2;
    double m = mpz_get_d_2exp(&exp2, n.get_mpz_t());
    return std::log(m) + static_cast<double>(exp2) * M_LN2;
}

double log_rational(const Rational& q) {
    return log_bigint(q.get_num()) - log_bigint(q.get_den());
}

double to_double(const BigInt& n) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 1020)
        return mpz_sgn(n.get_mpz_t()) > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
    return n.get_d();
}

double to_double(const Rational& q) {
    long nb = static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2));
    long db = static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
    if (nb - db > 1020)
        return sgn(q) > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    if (db - nb > 1070) return 0.0;
    return q.get_d();
}

Rational rational_from_decimal(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw validation_error("empty decimal literal");
    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }

    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_dot) throw validation_error("malformed decimal: " + text);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw validation_error("malformed decimal: " + text);
        }
    }
    long exp10 = 0;
    if (i < s.size()) { // exponent part
        ++i;
        try {
            exp10 = std::stol(s.substr(i));
        } catch (...) {
            throw validation_error("malformed decimal exponent: " + text);
        }
    }
    if (!seen_digit) throw validation_error("malformed decimal: " + text);

    BigInt num(digits.empty() ? "0" : digits, 10); // base 10: GMP would read "025" as octal
    if (neg) num = -num;
    long net = exp10 - frac_digits;
    Rational r(num);
    BigInt ten = 10;
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(net < 0 ? -net : net));
    if (net >= 0) r *= Rational(pw); else r /= Rational(pw);
    r.canonicalize();
    return r;
}

} // namespace maryland
