#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pirlab {

using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long num, long den) { return Rational(num) / Rational(den); }

/// Fixed-point rendering with round-half-up, e.g. "0.3571".
std::string format_decimal(const Rational& r, int places = 4);
/// "5/14 (0.3571)"; integers print as "1/1 (1.0000)".
std::string format_rational(const Rational& r, int places = 4);
/// "5/14"
std::string format_fraction(const Rational& r);

}  // namespace pirlab
