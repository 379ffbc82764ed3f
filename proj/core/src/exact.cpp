#include "skewmix/exact.hpp"

#include "skewmix/errors.hpp"

namespace skewmix {

namespace {

BigInt pow10(int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational pow10_rational(int e) {
  return e >= 0 ? Rational(pow10(e)) : Rational(BigInt(1), pow10(-e));
}

}  // namespace

Rational pow_rational(const Rational& base, unsigned exponent) {
  Rational r = 1;
  for (unsigned i = 0; i < exponent; ++i) r *= base;
  return r;
}

std::string to_decimal(const Rational& value, int significant) {
  if (significant < 1) throw InvalidArgument("to_decimal: need at least one significant digit");
  if (value == 0) return "0";
  std::string sign = value < 0 ? "-" : "";
  const Rational q = value < 0 ? Rational(-value) : value;

  // e = floor(log10 q), starting from the digit-count estimate.
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  int e = static_cast<int>(num.str().size()) - static_cast<int>(den.str().size());
  while (pow10_rational(e) > q) --e;
  while (pow10_rational(e + 1) <= q) ++e;

  const Rational scaled = q * pow10_rational(significant - 1 - e);
  BigInt digits = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
  const Rational remainder = scaled - Rational(digits);
  const Rational half(1, 2);
  if (remainder > half || (remainder == half && (digits & 1) != 0)) ++digits;
  if (digits == pow10(significant)) {
    digits /= 10;
    ++e;
  }

  std::string d = digits.str();
  while (d.size() > 1 && d.back() == '0') d.pop_back();

  if (e >= -7 && e < significant) {
    std::string out;
    if (e < 0) {
      out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + d;
    } else if (static_cast<int>(d.size()) <= e + 1) {
      out = d + std::string(static_cast<std::size_t>(e + 1) - d.size(), '0');
    } else {
      out = d.substr(0, static_cast<std::size_t>(e + 1)) + "." + d.substr(static_cast<std::size_t>(e + 1));
    }
    return sign + out;
  }
  std::string mantissa = d.substr(0, 1);
  if (d.size() > 1) mantissa += "." + d.substr(1);
  const std::string exponent = std::to_string(e < 0 ? -e : e);
  return sign + mantissa + "e" + (e < 0 ? "-" : "+") + (exponent.size() < 2 ? "0" : "") + exponent;
}

std::string to_fraction(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

}  // namespace skewmix
