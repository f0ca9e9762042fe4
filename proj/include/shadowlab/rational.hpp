#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace shadowlab {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p" or "p/q" (canonicalized). Throws ParseError.
Rational parse_rational(std::string_view text);

// Canonical "p" or "p/q" form; parse_rational(format(x)) == x.
std::string format(Rational const& x);

inline Rational abs(Rational const& x) { return x < 0 ? Rational(-x) : x; }

// base^exponent for any integer exponent; base must be nonzero when exponent < 0.
Rational power(Rational const& base, std::int64_t exponent);

// True when x is (signed) p / n^s for integers p and s >= 0.
bool denominator_is_power_of(Rational const& x, std::int64_t n);

}  // namespace shadowlab
