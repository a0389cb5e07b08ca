#include "pirlab/rational.hpp"

namespace pirlab {

using boost::multiprecision::cpp_int;

std::string format_decimal(const Rational& r, int places) {
  const bool negative = r < 0;
  const Rational a = negative ? Rational(-r) : r;
  cpp_int scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const cpp_int num = boost::multiprecision::numerator(a) * scale * 2 + boost::multiprecision::denominator(a);
  const cpp_int scaled = num / (boost::multiprecision::denominator(a) * 2);  // floor(a * scale + 1/2)
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) <= places) digits.insert(0, places + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  return (negative && scaled != 0 ? "-" : "") + out;
}

std::string format_fraction(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::string format_rational(const Rational& r, int places) {
  return format_fraction(r) + " (" + format_decimal(r, places) + ")";
}

}  // namespace pirlab
