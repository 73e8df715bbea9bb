#pragma once

// Checked 64-bit integer arithmetic and small integer-vector helpers.
// Every operation that could wrap raises ArithmeticOverflow instead.

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "katofan/errors.hpp"

namespace katofan {

using Int = std::int64_t;
using Vec = std::vector<Int>;

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in subtraction");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}

inline Int checked_neg(Int a) { return checked_sub(0, a); }

inline Int checked_abs(Int a) { return a < 0 ? checked_neg(a) : a; }

inline Int narrow(__int128 v) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
    throw ArithmeticOverflow("value does not fit in 64 bits");
  return static_cast<Int>(v);
}

inline Int gcd(Int a, Int b) { return std::gcd(checked_abs(a), checked_abs(b)); }

/// Floor division for b != 0.
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct ExtendedGcd {
  Int g, x, y;  // x*a + y*b = g >= 0
};

ExtendedGcd extended_gcd(Int a, Int b);

// ---- vectors -------------------------------------------------------------

Int dot(std::span<const Int> a, std::span<const Int> b);
Vec add(std::span<const Int> a, std::span<const Int> b);
Vec sub(std::span<const Int> a, std::span<const Int> b);
Vec scale(Int k, std::span<const Int> a);
Vec negate(std::span<const Int> a);
/// a*x + b*y, coordinatewise.
Vec combine(Int a, std::span<const Int> x, Int b, std::span<const Int> y);

bool is_zero(std::span<const Int> v);
Int content(std::span<const Int> v);  // gcd of entries, 0 for the zero vector
/// Divides by the content; the zero vector is returned unchanged.
Vec primitive(std::span<const Int> v);
Vec unit_vector(int n, int i);

std::string to_string(std::span<const Int> v);

}  // namespace katofan
