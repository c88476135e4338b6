#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lipvol {

/// Arbitrary-precision integer (GMP).
using BigInt = mpz_class;

/// Exact rational, always kept in canonical form (denominator > 0, reduced).
using ExactRational = mpq_class;

/// Builds num/den in canonical form. Throws std::invalid_argument on den == 0.
ExactRational make_rational(const BigInt& num, const BigInt& den);

/// Parses "a/b" or an integer "a". Throws std::invalid_argument otherwise.
ExactRational parse_rational(std::string_view text);

/// "p/q" (always with a slash, "p/1" for integers).
std::string to_fraction_string(const ExactRational& q);

inline std::string to_decimal_string(const BigInt& z) { return z.get_str(10); }

/// Double within one ulp of q (truncated through a 128-bit float). Works for
/// numerators/denominators far beyond the double range as long as the
/// quotient itself is in range.
double to_double(const ExactRational& q);

/// Natural log of a positive rational, accurate for huge numerators and
/// denominators.
double log_of(const ExactRational& q);
double log_of(const BigInt& z);

ExactRational pow(const ExactRational& base, unsigned long exponent);
BigInt pow(const BigInt& base, unsigned long exponent);
BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);

}  // namespace lipvol
