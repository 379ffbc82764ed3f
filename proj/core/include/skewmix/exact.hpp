#ifndef SKEWMIX_EXACT_HPP
#define SKEWMIX_EXACT_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace skewmix {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// `significant` significant digits, round-half-even, trailing zeros dropped.
/// Fixed notation for 1e-7 <= |q| < 10^significant, otherwise d.ddde[+-]XX.
std::string to_decimal(const Rational& q, int significant = 12);

/// "num/den" in lowest terms; integers render as "num/1".
std::string to_fraction(const Rational& q);

Rational pow_rational(const Rational& base, unsigned exponent);

}  // namespace skewmix

#endif  // SKEWMIX_EXACT_HPP
