#include "gridpos/rational.hpp"

#include "gridpos/error.hpp"

namespace gridpos {

std::string to_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

std::string to_string(const BigInt& z) { return z.str(); }

namespace {

BigInt parse_bigint(std::string_view text) {
  if (text.empty()) fail(Errc::ParseError, "empty number");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) fail(Errc::ParseError, "'" + std::string(text) + "' is not a number");
  BigInt out = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') fail(Errc::ParseError, "'" + std::string(text) + "' is not a number");
    out = out * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(text.substr(0, slash));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) fail(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) {
      fail(Errc::ParseError, "'" + std::string(text) + "' is not a number");
    }
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    const bool negative = !digits.empty() && digits[0] == '-';
    BigInt whole = parse_bigint(digits);
    BigInt scale = pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt part = parse_bigint(frac);
    BigInt num = whole * scale + (negative ? BigInt(-part) : part);
    return Rational(num, scale);
  }
  return Rational(parse_bigint(text));
}

BigInt pow(const BigInt& base, unsigned exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent) b *= b;
  }
  return result;
}

Rational pow(const Rational& base, unsigned exponent) {
  return Rational(pow(numerator_of(base), exponent), pow(denominator_of(base), exponent));
}

BigInt iroot_floor(const BigInt& x, unsigned k) {
  if (x < 0) fail(Errc::OutOfRange, "integer root of a negative number");
  if (k == 0) fail(Errc::InvalidConfig, "zeroth root");
  if (x < 2 || k == 1) return x;
  // Binary search on [0, 2^(bits/k + 1)].
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(x)) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) >> 1;
    if (pow(mid, k) <= x) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  ensure(pow(lo, k) <= x && pow(BigInt(lo + 1), k) > x, "integer root multiply-back");
  return lo;
}

}  // namespace gridpos
