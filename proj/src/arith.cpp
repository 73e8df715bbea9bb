#include "katofan/arith.hpp"

#include <sstream>

namespace katofan {

ExtendedGcd extended_gcd(Int a, Int b) {
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    Int tmp = checked_sub(old_r, checked_mul(q, r));
    old_r = r;
    r = tmp;
    tmp = checked_sub(old_s, checked_mul(q, s));
    old_s = s;
    s = tmp;
    tmp = checked_sub(old_t, checked_mul(q, t));
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {checked_neg(old_r), checked_neg(old_s), checked_neg(old_t)};
  return {old_r, old_s, old_t};
}

Int dot(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors of different length");
  __int128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<__int128>(a[i]) * b[i];
    if (acc > static_cast<__int128>(INT64_MAX) * 4 || acc < static_cast<__int128>(INT64_MIN) * 4)
      throw ArithmeticOverflow("integer overflow in dot product");
  }
  return narrow(acc);
}

Vec add(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum of different lengths");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
  return r;
}

Vec sub(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference of different lengths");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_sub(a[i], b[i]);
  return r;
}

Vec scale(Int k, std::span<const Int> a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_mul(k, a[i]);
  return r;
}

Vec negate(std::span<const Int> a) { return scale(-1, a); }

Vec combine(Int a, std::span<const Int> x, Int b, std::span<const Int> y) {
  if (x.size() != y.size()) throw DimensionMismatch("combination of vectors of different lengths");
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    r[i] = narrow(static_cast<__int128>(a) * x[i] + static_cast<__int128>(b) * y[i]);
  return r;
}

bool is_zero(std::span<const Int> v) {
  for (Int x : v)
    if (x != 0) return false;
  return true;
}

Int content(std::span<const Int> v) {
  Int g = 0;
  for (Int x : v) g = gcd(g, x);
  return g;
}

Vec primitive(std::span<const Int> v) {
  const Int g = content(v);
  Vec r(v.begin(), v.end());
  if (g > 1)
    for (Int& x : r) x /= g;
  return r;
}

Vec unit_vector(int n, int i) {
  Vec v(static_cast<std::size_t>(n), 0);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

std::string to_string(std::span<const Int> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace katofan
