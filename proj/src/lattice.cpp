#include "katofan/lattice.hpp"

#include <algorithm>

namespace katofan {

namespace {

// Replaces rows r and s of m by (x*r + y*s, p*r + q*s).
void mix_rows(IntMatrix& m, std::size_t r, std::size_t s, Int x, Int y, Int p, Int q) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const __int128 a = m(r, j), b = m(s, j);
    m(r, j) = narrow(x * a + y * b);
    m(s, j) = narrow(p * a + q * b);
  }
}

void add_row_multiple(IntMatrix& m, std::size_t target, std::size_t source, Int k) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    m(target, j) = narrow(static_cast<__int128>(m(target, j)) + static_cast<__int128>(k) * m(source, j));
}

void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = checked_neg(m(r, j));
}

bool is_diagonal(const IntMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j && a(i, j) != 0) return false;
  return true;
}

}  // namespace

HermiteResult hermite_rows(const IntMatrix& a) {
  HermiteResult res{a, IntMatrix::identity(a.rows()), {}};
  IntMatrix& h = res.form;
  IntMatrix& u = res.transform;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.swap_rows(r, i);
        u.swap_rows(r, i);
        continue;
      }
      const Int x0 = h(r, c), y0 = h(i, c);
      const auto eg = extended_gcd(x0, y0);
      const Int p = -(y0 / eg.g), q = x0 / eg.g;
      mix_rows(h, r, i, eg.x, eg.y, p, q);
      mix_rows(u, r, i, eg.x, eg.y, p, q);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Int k = floor_div(h(i, c), h(r, c));
      if (k == 0) continue;
      add_row_multiple(h, i, r, checked_neg(k));
      add_row_multiple(u, i, r, checked_neg(k));
    }
    res.pivot_columns.push_back(c);
    ++r;
  }
  return res;
}

IntMatrix unimodular_inverse(const IntMatrix& u) {
  const auto inv = inverse(to_rational(u));
  if (!inv) throw InvalidInput("matrix is not invertible");
  IntMatrix out(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) {
      const Rational& x = (*inv)(i, j);
      if (!x.is_integer()) throw InvalidInput("matrix is not unimodular");
      out(i, j) = x.num();
    }
  return out;
}

Int determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        const __int128 v = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        narrow(v);
        m[i][j] = v;
      }
    }
    prev = m[k][k];
  }
  return narrow(sign * m[n - 1][n - 1]);
}

std::size_t rank(const IntMatrix& a) { return hermite_rows(a).rank(); }

std::size_t rank_of(const std::vector<Vec>& vectors, int ambient) {
  return rank(IntMatrix::from_rows(vectors, static_cast<std::size_t>(ambient)));
}

std::vector<Vec> integer_kernel(const IntMatrix& a) {
  const auto h = hermite_rows(a.transpose());
  std::vector<Vec> out;
  for (std::size_t i = h.rank(); i < h.transform.rows(); ++i) out.push_back(h.transform.row(i));
  return out;
}

std::vector<Vec> lattice_basis(const std::vector<Vec>& gens, int ambient) {
  const auto h = hermite_rows(IntMatrix::from_rows(gens, static_cast<std::size_t>(ambient)));
  std::vector<Vec> out;
  for (std::size_t i = 0; i < h.rank(); ++i) out.push_back(h.form.row(i));
  return out;
}

std::optional<Vec> lattice_coordinates(const std::vector<Vec>& basis, const Vec& x) {
  if (basis.empty()) {
    if (is_zero(x)) return Vec{};
    return std::nullopt;
  }
  const RatMatrix b = to_rational(IntMatrix::from_columns(basis, x.size()));
  const auto sol = solve(b, to_rational(x));
  if (!sol) return std::nullopt;
  Vec out;
  for (const Rational& c : *sol) {
    if (!c.is_integer()) return std::nullopt;
    out.push_back(c.num());
  }
  return out;
}

LatticeQuotient quotient_by_span(const std::vector<Vec>& vectors, int ambient) {
  const auto n = static_cast<std::size_t>(ambient);
  const IntMatrix b = IntMatrix::from_columns(vectors, n);
  const auto h = hermite_rows(b);
  const std::size_t r = h.rank();
  const IntMatrix inv = unimodular_inverse(h.transform);
  LatticeQuotient q;
  q.projection = h.transform.row_block(r, n - r);
  q.section = inv.column_block(r, n - r);
  for (std::size_t j = 0; j < r; ++j) q.kernel_basis.push_back(inv.column(j));
  return q;
}

std::vector<Vec> saturated_span_basis(const std::vector<Vec>& vectors, int ambient) {
  return quotient_by_span(vectors, ambient).kernel_basis;
}

std::vector<Int> smith_invariants(const IntMatrix& a) {
  IntMatrix m = a;
  for (int guard = 0; guard < 1000 && !is_diagonal(m); ++guard) {
    m = hermite_rows(m).form.transpose();
  }
  if (!is_diagonal(m)) throw ArithmeticOverflow("Smith normal form did not converge");
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (m(i, i) != 0) d.push_back(checked_abs(m(i, i)));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Int g = gcd(d[i], d[j]);
      const Int l = checked_mul(d[i] / g, d[j]);
      d[i] = g;
      d[j] = l;
    }
  return d;
}

// ---- rational ------------------------------------------------------------

RowEchelon rref(const RatMatrix& a) {
  RowEchelon res{a, {}};
  RatMatrix& m = res.form;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    const Rational inv = Rational(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rational k = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= k * m(r, j);
    }
    res.pivot_columns.push_back(c);
    ++r;
  }
  return res;
}

std::size_t rank(const RatMatrix& a) { return rref(a).pivot_columns.size(); }

Rational determinant(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  RatMatrix m = a;
  Rational det(1);
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const Rational k = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= k * m(c, j);
    }
  }
  return det;
}

std::vector<RatVec> kernel(const RatMatrix& a) {
  const auto e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivot_columns) is_pivot[c] = true;
  std::vector<RatVec> out;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    RatVec v(a.cols(), Rational(0));
    v[free] = Rational(1);
    for (std::size_t r = 0; r < e.pivot_columns.size(); ++r) v[e.pivot_columns[r]] = -e.form(r, free);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<RatVec> solve(const RatMatrix& a, const RatVec& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto e = rref(aug);
  RatVec x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < e.pivot_columns.size(); ++r) {
    const auto c = e.pivot_columns[r];
    if (c == a.cols()) return std::nullopt;
    x[c] = e.form(r, a.cols());
  }
  return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = Rational(1);
  }
  const auto e = rref(aug);
  if (e.pivot_columns.size() < n || (n > 0 && e.pivot_columns[n - 1] != n - 1)) return std::nullopt;
  return e.form.column_block(n, n);
}

Subspace::Subspace(std::size_t ambient, const std::vector<RatVec>& spanning) : ambient_(ambient) {
  if (spanning.empty()) return;
  const auto e = rref(RatMatrix::from_rows(spanning, ambient));
  for (std::size_t r = 0; r < e.pivot_columns.size(); ++r) basis_.push_back(e.form.row(r));
}

Subspace Subspace::whole(std::size_t ambient) {
  std::vector<RatVec> b;
  for (std::size_t i = 0; i < ambient; ++i) {
    RatVec v(ambient, Rational(0));
    v[i] = Rational(1);
    b.push_back(std::move(v));
  }
  return Subspace(ambient, b);
}

bool Subspace::contains(const RatVec& v) const {
  if (v.size() != ambient_) throw DimensionMismatch("vector not in the ambient space");
  RatVec w = v;
  for (const RatVec& b : basis_) {
    std::size_t p = 0;
    while (b[p].is_zero()) ++p;
    if (w[p].is_zero()) continue;
    const Rational k = w[p];
    for (std::size_t j = p; j < ambient_; ++j) w[j] -= k * b[j];
  }
  for (const Rational& x : w)
    if (!x.is_zero()) return false;
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  for (const RatVec& b : other.basis_)
    if (!contains(b)) return false;
  return true;
}

Subspace Subspace::operator+(const Subspace& other) const {
  std::vector<RatVec> all = basis_;
  all.insert(all.end(), other.basis_.begin(), other.basis_.end());
  return Subspace(ambient_, all);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (basis_.empty() || other.basis_.empty()) return Subspace(ambient_);
  const std::size_t du = basis_.size(), dw = other.basis_.size();
  RatMatrix m(ambient_, du + dw);
  for (std::size_t i = 0; i < ambient_; ++i) {
    for (std::size_t k = 0; k < du; ++k) m(i, k) = basis_[k][i];
    for (std::size_t k = 0; k < dw; ++k) m(i, du + k) = -other.basis_[k][i];
  }
  std::vector<RatVec> vecs;
  for (const RatVec& coeffs : kernel(m)) {
    RatVec v(ambient_, Rational(0));
    for (std::size_t k = 0; k < du; ++k)
      if (!coeffs[k].is_zero())
        for (std::size_t i = 0; i < ambient_; ++i) v[i] += coeffs[k] * basis_[k][i];
    vecs.push_back(std::move(v));
  }
  return Subspace(ambient_, vecs);
}

Subspace Subspace::image(const RatMatrix& map) const {
  if (map.cols() != ambient_) throw DimensionMismatch("map does not act on this space");
  std::vector<RatVec> vecs;
  for (const RatVec& b : basis_) vecs.push_back(apply<Rational>(map, b));
  return Subspace(map.rows(), vecs);
}

Subspace kernel_space(const RatMatrix& a) { return Subspace(a.cols(), kernel(a)); }

Subspace image_space(const RatMatrix& a) { return Subspace(a.rows(), a.column_list()); }

}  // namespace katofan
