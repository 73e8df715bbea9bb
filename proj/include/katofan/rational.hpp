#pragma once

#include <compare>
#include <string>

#include "katofan/arith.hpp"

namespace katofan {

/// Exact rational number with a normalized 64-bit numerator/denominator.
/// Intermediate products are formed in 128 bits and reduced before narrowing.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(Int n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(Int n, Int d);

  /// Parses "p", "-p" or "p/q".
  static Rational parse(const std::string& text);

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::string str() const;

 private:
  static Rational from_wide(__int128 n, __int128 d);

  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace katofan
