#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace nlslab {

/// Arbitrary-precision exact rational.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q", "-p/q". Throws InvalidInput on malformed text or q = 0.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

inline Rational inverse(const Rational& value) { return Rational(1) / value; }

/// Hölder conjugate exponent expressed on reciprocals: 1/p' = 1 - 1/p.
inline Rational conjugate_reciprocal(const Rational& inv_p) { return Rational(1) - inv_p; }

}  // namespace nlslab
