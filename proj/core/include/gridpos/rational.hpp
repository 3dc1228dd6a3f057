#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace gridpos {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Always "num/den" with den > 0, also for integers ("3/1").
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

// Accepts "a/b", "a" or a terminating decimal "0.25".
Rational parse_rational(std::string_view text);

BigInt pow(const BigInt& base, unsigned exponent);
Rational pow(const Rational& base, unsigned exponent);

// Largest r >= 0 with r^k <= x (x >= 0, k >= 1).
BigInt iroot_floor(const BigInt& x, unsigned k);

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

}  // namespace gridpos
