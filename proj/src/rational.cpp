#include "symred/rational.hpp"

#include <limits>

namespace symred {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

long long narrow(__int128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw std::overflow_error("rational overflow");
  return static_cast<long long>(v);
}

}  // namespace

Rational Rational::from128(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return Rational(0);
  __int128 g = gcd128(n, d);
  Rational r;
  r.num = narrow(n / g);
  r.den = narrow(d / g);
  return r;
}

Rational::Rational(long long n, long long d) { *this = from128(n, d); }

Rational Rational::operator-() const { return from128(-__int128(num), den); }

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from128(__int128(a.num) * b.den + __int128(b.num) * a.den,
                           __int128(a.den) * b.den);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from128(__int128(a.num) * b.num, __int128(a.den) * b.den);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("rational division by zero");
  return Rational::from128(__int128(a.num) * b.den, __int128(a.den) * b.num);
}

bool operator<(const Rational& a, const Rational& b) {
  return __int128(a.num) * b.den < __int128(b.num) * a.den;
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  return from128(den, num);
}

Rational Rational::pow_int(long long e) const {
  if (e < 0) return reciprocal().pow_int(-e);
  Rational acc(1);
  Rational base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = (e > 1) ? base * base : base;
    e >>= 1;
  }
  return acc;
}

std::string Rational::str() const {
  std::string s = std::to_string(num);
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

}  // namespace symred
