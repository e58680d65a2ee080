#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace gdof {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "2", "0.75", ".5", "3/4" or "1.5/2" into an exact rational.
/// Throws InvalidParameter on anything else.
Rational parse_rational(std::string_view text);

/// Exact text form: a terminating decimal when the denominator divides a
/// power of ten ("0.75", "3"), otherwise "p/q" ("2/3").
std::string format_exact(const Rational& value);

/// Twelve significant digits, or "" for NaN.
std::string format_real(double value);

double to_double(const Rational& value);

BigInt floor_of(const Rational& value);

BigInt pow_big(unsigned base, unsigned exponent);

} // namespace gdof
