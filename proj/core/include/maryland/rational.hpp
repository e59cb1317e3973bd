#ifndef MARYLAND_RATIONAL_HPP
#define MARYLAND_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace maryland {

using BigInt = mpz_class;
using Rational = mpq_class;

// x reduced into [0,1).
Rational frac(const Rational& x);

// min_{l in Z} |x - l|, exact.  Result is in [0, 1/2].
Rational dist_to_int(const Rational& x);

// Natural log of a positive big integer, accurate to double precision.
// Uses the mantissa/exponent split, no heap-allocated float needed.
double log_bigint(const BigInt& n);

// Natural log of a positive rational.
double log_rational(const Rational& q);

// Double conversion that saturates to +/-inf instead of trapping.
double to_double(const BigInt& n);
double to_double(const Rational& q);

// Exact rational from a decimal string such as "0.1375" or "-2.5e-3".
// Throws validation_error on malformed input.
Rational rational_from_decimal(const std::string& text);

} // namespace maryland

#endif
