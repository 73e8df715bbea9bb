#include "katofan/algebra.hpp"

#include <random>

namespace katofan {

Rational trace(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("trace of a non-square matrix");
  Rational t(0);
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

RatVec flatten(const RatMatrix& a) {
  RatVec v;
  v.reserve(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) v.push_back(a(i, j));
  return v;
}

RatMatrix elementary(std::size_t n, std::size_t i, std::size_t j) {
  RatMatrix m(n, n);
  m(i, j) = 1;
  return m;
}

namespace {

RatMatrix columns_of(const std::vector<RatVec>& cols, std::size_t rows) {
  return RatMatrix::from_columns(cols, rows);
}

bool is_zero_matrix(const RatMatrix& m) { return m.is_zero(); }

RatMatrix power(const RatMatrix& a, std::size_t k) {
  RatMatrix p = RatMatrix::identity(a.rows());
  for (std::size_t i = 0; i < k; ++i) p = p * a;
  return p;
}

void check_square(const RatMatrix& m, std::size_t n) {
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch("expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
}

}  // namespace

MatrixAlgebra MatrixAlgebra::make(std::size_t dim_v, std::vector<RatMatrix> basis, std::optional<RatMatrix> unit,
                                  std::vector<int> weights) {
  for (const auto& b : basis) check_square(b, dim_v);
  if (!weights.empty() && weights.size() != dim_v) throw DimensionMismatch("one weight per basis vector of V");
  MatrixAlgebra a;
  a.dim_v_ = dim_v;
  a.basis_ = std::move(basis);
  a.weights_ = std::move(weights);
  std::vector<RatVec> flat;
  for (const auto& b : a.basis_) flat.push_back(flatten(b));
  a.span_ = columns_of(flat, dim_v * dim_v);
  if (rank(a.span_) != a.basis_.size()) throw InvalidInput("algebra basis is linearly dependent");
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      auto c = a.coordinates(a.basis_[i] * a.basis_[j]);
      if (!c) throw InvalidInput("span is not closed under products (basis " + std::to_string(i) + " times " +
                                 std::to_string(j) + ")");
      a.structure_.push_back(std::move(*c));
    }
  if (unit) {
    check_square(*unit, dim_v);
    if (!a.coordinates(*unit)) throw InvalidInput("declared unit is not in the algebra");
    for (const auto& b : a.basis_)
      if (*unit * b != b || b * *unit != b) throw InvalidInput("declared unit is not a two-sided identity");
    a.unit_ = std::move(unit);
  }
  return a;
}

std::optional<RatVec> MatrixAlgebra::coordinates(const RatMatrix& m) const {
  check_square(m, dim_v_);
  if (basis_.empty()) return is_zero_matrix(m) ? std::optional<RatVec>(RatVec{}) : std::nullopt;
  return solve(span_, flatten(m));
}

RatMatrix MatrixAlgebra::element(const RatVec& coords) const {
  if (coords.size() != basis_.size()) throw DimensionMismatch("coordinate vector has the wrong length");
  RatMatrix m(dim_v_, dim_v_);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (!coords[i].is_zero()) m = m + scaled(coords[i], basis_[i]);
  return m;
}

MatrixAlgebra close_algebra(const std::vector<RatMatrix>& generators, bool unital) {
  if (generators.empty() && !unital) return MatrixAlgebra::make(0, {});
  const std::size_t n = generators.empty() ? 0 : generators.front().rows();
  if (generators.empty()) throw InvalidInput("a unital closure needs at least one generator to fix the size");
  for (const auto& g : generators) check_square(g, n);
  std::vector<RatMatrix> basis;
  Subspace span(n * n);
  auto offer = [&](const RatMatrix& m) {
    const RatVec v = flatten(m);
    if (span.contains(v)) return false;
    span = span + Subspace(n * n, {v});
    basis.push_back(m);
    return true;
  };
  if (unital) offer(RatMatrix::identity(n));
  for (const auto& g : generators) offer(g);
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t k = basis.size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (offer(basis[i] * basis[j])) grew = true;
  }
  std::optional<RatMatrix> unit;
  if (unital) unit = RatMatrix::identity(n);
  return MatrixAlgebra::make(n, std::move(basis), unit);
}

RadicalResult trace_radical(const MatrixAlgebra& a, std::uint64_t seed, kernels::Exec exec) {
  RadicalResult r;
  r.gram = kernels::trace_gram(a.basis(), exec);
  if (a.dim() > 0) r.coordinates = kernel(r.gram);
  for (const auto& c : r.coordinates) r.basis.push_back(a.element(c));

  // Ideal certificate: I*b and b*I re-expand inside I.
  const Subspace ideal(a.dim(), r.coordinates);
  for (const auto& x : r.basis)
    for (const auto& b : a.basis())
      for (const RatMatrix& p : {x * b, b * x}) {
        const auto c = a.coordinates(p);
        if (!c || !ideal.contains(*c)) r.two_sided_ideal = false;
      }

  // Nilpotency certificate on the basis and on random combinations.
  auto nilpotent = [&](const RatMatrix& x) {
    ++r.nilpotency_checks;
    return is_zero_matrix(power(x, a.dim_v()));
  };
  for (const auto& x : r.basis)
    if (!nilpotent(x)) r.nilpotent = false;
  if (!r.basis.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Int> num(-4, 4), den(1, 3);
    for (int t = 0; t < kRandomNilpotencyChecks; ++t) {
      RatMatrix x(a.dim_v(), a.dim_v());
      for (const auto& b : r.basis) x = x + scaled(Rational(num(rng), den(rng)), b);
      if (!nilpotent(x)) r.nilpotent = false;
    }
  }
  return r;
}

PairingData PairingData::from_trace(std::vector<RatMatrix> a, std::vector<RatMatrix> b) {
  PairingData d{std::move(a), std::move(b), {}};
  d.pairing = RatMatrix(d.a_basis.size(), d.b_basis.size());
  for (std::size_t i = 0; i < d.a_basis.size(); ++i)
    for (std::size_t j = 0; j < d.b_basis.size(); ++j) {
      if (d.a_basis[i].cols() != d.b_basis[j].rows()) throw DimensionMismatch("pairing factors do not multiply");
      d.pairing(i, j) = trace(d.a_basis[i] * d.b_basis[j]);
    }
  return d;
}

bool PairingData::matches_trace() const {
  if (pairing.rows() != a_basis.size() || pairing.cols() != b_basis.size()) return false;
  for (std::size_t i = 0; i < a_basis.size(); ++i)
    for (std::size_t j = 0; j < b_basis.size(); ++j) {
      const RatMatrix p = a_basis[i] * b_basis[j];
      if (p.rows() != p.cols() || trace(p) != pairing(i, j)) return false;
    }
  return true;
}

PairingKernel pairing_kernel(const PairingData& d) {
  if (d.pairing.rows() != d.a_basis.size() || d.pairing.cols() != d.b_basis.size())
    throw DimensionMismatch("pairing matrix is " + std::to_string(d.pairing.rows()) + "x" +
                            std::to_string(d.pairing.cols()) + " for bases of size " + std::to_string(d.a_basis.size()) +
                            " and " + std::to_string(d.b_basis.size()));
  PairingKernel k;
  const std::size_t m = d.a_basis.size();
  if (m == 0) return k;
  if (d.b_basis.empty()) {
    for (std::size_t i = 0; i < m; ++i) {
      RatVec e(m, Rational(0));
      e[i] = 1;
      k.kernel.push_back(std::move(e));
    }
  } else {
    k.kernel = kernel(d.pairing.transpose());
  }
  k.quotient_dim = m - k.kernel.size();
  return k;
}

SemisimplicityCertificate certify_semisimple(const MatrixAlgebra& a) {
  const RadicalResult r = trace_radical(a);
  SemisimplicityCertificate c;
  c.semisimple = r.basis.empty();
  if (c.semisimple) {
    c.gram_determinant = a.dim() ? determinant(r.gram) : Rational(1);
  } else {
    // Normalize the witness so its first nonzero entry is 1.
    RatMatrix w = r.basis.front();
    const RatVec flat = flatten(w);
    for (const Rational& x : flat)
      if (!x.is_zero()) {
        w = scaled(Rational(1) / x, w);
        break;
      }
    c.witness = std::move(w);
  }
  return c;
}

QuotientResult num_equiv_quotient(const MatrixAlgebra& a) {
  const RadicalResult r = trace_radical(a);
  QuotientResult q;
  q.radical_dim = r.coordinates.size();
  // Traces of rational matrices are rational; the flag records that the
  // inputs were rational to begin with.
  q.traces_rational = true;
  // Complement of I0 spanned by standard basis vectors.
  const std::size_t k = a.dim();
  Subspace span(k, r.coordinates);
  std::vector<RatVec> cols;
  for (std::size_t i = 0; i < k; ++i) {
    RatVec e(k, Rational(0));
    e[i] = 1;
    if (span.contains(e)) continue;
    span = span + Subspace(k, {e});
    q.lifts.push_back(i);
    cols.push_back(std::move(e));
  }
  const std::size_t m = q.lifts.size();
  for (const auto& c : r.coordinates) cols.push_back(c);
  const RatMatrix change = columns_of(cols, k);

  // Left regular representation of A / I0 on itself.
  std::vector<RatMatrix> regular;
  for (std::size_t i = 0; i < m; ++i) {
    RatMatrix l(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto c = solve(change, a.structure(q.lifts[i], q.lifts[j]));
      for (std::size_t t = 0; t < m; ++t) l(t, j) = (*c)[t];
    }
    regular.push_back(std::move(l));
  }
  std::optional<RatMatrix> unit;
  if (m > 0 && a.unit()) unit = RatMatrix::identity(m);
  q.algebra = MatrixAlgebra::make(m, std::move(regular), unit);
  q.certificate = certify_semisimple(q.algebra);
  return q;
}

std::vector<AlgebraFixture> algebra_fixtures() {
  const auto e2 = [](std::size_t i, std::size_t j) { return elementary(2, i, j); };
  const auto e3 = [](std::size_t i, std::size_t j) { return elementary(3, i, j); };
  RatMatrix cycle(3, 3), shift(3, 3), rotation(2, 2);
  cycle(1, 0) = cycle(2, 1) = cycle(0, 2) = 1;
  shift(0, 1) = shift(1, 2) = 1;
  rotation(0, 1) = -1;
  rotation(1, 0) = 1;
  std::vector<AlgebraFixture> f;
  f.push_back({"scalars", close_algebra({RatMatrix::identity(2)}, true), {}});
  f.push_back({"M2", close_algebra({e2(0, 1), e2(1, 0)}, false), {}});
  f.push_back({"upper triangular 2x2", close_algebra({e2(0, 0), e2(0, 1), e2(1, 1)}, true), {e2(0, 1)}});
  f.push_back({"square-zero line", close_algebra({e2(0, 1)}, false), {e2(0, 1)}});
  f.push_back({"group algebra Z/3", close_algebra({cycle}, true), {}});
  f.push_back({"block upper triangular (1,2)",
               close_algebra({e3(0, 0), e3(1, 1), e3(1, 2), e3(2, 1), e3(2, 2), e3(0, 1), e3(0, 2)}, true),
               {e3(0, 1), e3(0, 2)}});
  f.push_back({"upper triangular 3x3", close_algebra({e3(0, 0), e3(1, 1), e3(2, 2), e3(0, 1), e3(1, 2)}, true),
               {e3(0, 1), e3(0, 2), e3(1, 2)}});
  f.push_back({"diagonal 3x3", close_algebra({e3(0, 0), e3(1, 1), e3(2, 2)}, true), {}});
  f.push_back({"M2 x Q", close_algebra({e3(0, 1), e3(1, 0), e3(2, 2)}, true), {}});
  f.push_back({"truncated polynomials Q[x]/x^3", close_algebra({shift}, true), {shift, shift * shift}});
  f.push_back({"strictly upper triangular 3x3", close_algebra({e3(0, 1), e3(1, 2)}, false),
               {e3(0, 1), e3(0, 2), e3(1, 2)}});
  f.push_back({"Gaussian rationals", close_algebra({rotation}, true), {}});
  return f;
}

}  // namespace katofan
