#pragma once

#include <gmpxx.h>

#include <string>
#include <stdexcept>

namespace cohft {

// Exact arithmetic used on every rank/class path. Floating point appears
// only in the semisimple TQFT oracle.
using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p/q" or "p" (optional sign, arbitrary precision). Throws
// std::invalid_argument on malformed input or zero denominator.
Rational rational_from_string(const std::string& s);

// Canonical form: "p" when the denominator is 1, otherwise "p/q" reduced.
std::string rational_to_string(const Rational& q);

Rational rational_pow(const Rational& base, unsigned long exp);

Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);
Integer binomial_big(const Integer& n, unsigned long k);

// Nearest integer to q, ties toward +infinity.
Integer round_nearest(const Rational& q);

}  // namespace cohft
