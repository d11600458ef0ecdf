#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symred {

/// Exact rational number on 64-bit numerator/denominator, always normalized
/// (den > 0, gcd = 1). Desk-scale coefficients only: products are formed in
/// 128-bit and overflow throws rather than wrapping.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n) {}
  Rational(long long n, long long d);

  static Rational from128(__int128 n, __int128 d);

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }
  bool is_integer() const { return den == 1; }
  bool is_negative() const { return num < 0; }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  Rational reciprocal() const;
  /// b^e for integer e (e may be negative when *this is nonzero).
  Rational pow_int(long long e) const;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

}  // namespace symred
