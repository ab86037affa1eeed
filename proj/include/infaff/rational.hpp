#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace infaff {

/// Exact scalars for every coefficient in the library.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

/// Parses "p", "-p" or "p/q" and returns the value in lowest terms.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise (lowest terms, q > 0).
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);

/// Square root when q is the square of a rational, nullopt otherwise.
std::optional<Rational> exact_sqrt(const Rational& q);

Rational factorial(unsigned n);

}  // namespace infaff
