#include <random>

#include "doctest.h"
#include "katofan/algebra.hpp"

using namespace katofan;

namespace {

RatMatrix e2(std::size_t i, std::size_t j) { return elementary(2, i, j); }

Subspace span_of(const std::vector<RatMatrix>& ms, std::size_t n) {
  std::vector<RatVec> flat;
  for (const auto& m : ms) flat.push_back(flatten(m));
  return Subspace(n * n, flat);
}

}  // namespace

TEST_CASE("closing generators under products") {
  CHECK(close_algebra({RatMatrix::identity(2)}, false).dim() == 1);
  CHECK(close_algebra({e2(0, 1)}, false).dim() == 1);
  CHECK(close_algebra({e2(0, 1), e2(1, 0)}, false).dim() == 4);
  CHECK(close_algebra({e2(0, 1)}, true).dim() == 2);
  CHECK_THROWS_AS(close_algebra({e2(0, 1), RatMatrix::identity(3)}, false), DimensionMismatch);
}

TEST_CASE("algebra validation") {
  CHECK_THROWS_AS(MatrixAlgebra::make(2, {e2(0, 1), e2(1, 0)}), InvalidInput);
  CHECK_THROWS_AS(MatrixAlgebra::make(2, {e2(0, 1), scaled(Rational(2), e2(0, 1))}), InvalidInput);
  CHECK_THROWS_AS(MatrixAlgebra::make(2, {e2(0, 0)}, e2(1, 1)), InvalidInput);
  const MatrixAlgebra a = MatrixAlgebra::make(2, {e2(0, 0), e2(0, 1)});
  CHECK(a.structure(0, 1) == RatVec{0, 1});
  CHECK(a.structure(1, 0) == RatVec{0, 0});
}

TEST_CASE("trace radical examples") {
  const MatrixAlgebra m2 = close_algebra({e2(0, 1), e2(1, 0)}, false);
  CHECK(trace_radical(m2).basis.empty());

  const MatrixAlgebra upper = close_algebra({e2(0, 0), e2(0, 1), e2(1, 1)}, true);
  const RadicalResult r = trace_radical(upper);
  REQUIRE(r.basis.size() == 1);
  CHECK(span_of(r.basis, 2) == span_of({e2(0, 1)}, 2));
  CHECK(r.two_sided_ideal);
  CHECK(r.nilpotent);
  CHECK(r.nilpotency_checks == 1 + kRandomNilpotencyChecks);

  CHECK(trace_radical(close_algebra({RatMatrix::identity(2)}, true)).basis.empty());
}

TEST_CASE("pairing kernels") {
  const std::vector<RatMatrix> a{e2(0, 0), e2(1, 1)};
  const PairingData nondeg = PairingData::from_trace(a, a);
  CHECK(nondeg.matches_trace());
  CHECK(pairing_kernel(nondeg).kernel.empty());

  PairingData zero{a, a, RatMatrix(2, 2)};
  CHECK(pairing_kernel(zero).kernel.size() == 2);
  CHECK(pairing_kernel(zero).quotient_dim == 0);
  CHECK_FALSE(zero.matches_trace());

  PairingData rank_one{a, a, RatMatrix::from_rows({{1, 2}, {2, 4}})};
  CHECK(pairing_kernel(rank_one).kernel.size() == 1);

  PairingData bad{a, a, RatMatrix(3, 2)};
  CHECK_THROWS_AS(pairing_kernel(bad), DimensionMismatch);
}

TEST_CASE("quotient dimension equals pairing rank with planted kernels") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Int> d(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 2 + trial % 4, n = 2 + (trial / 2) % 4, r = trial % (std::min(m, n) + 1);
    RatMatrix x(m, r), y(r, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < r; ++j) x(i, j) = Rational(d(rng), 1 + static_cast<Int>(j));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n; ++j) y(i, j) = d(rng);
    const RatMatrix p = r ? x * y : RatMatrix(m, n);
    std::vector<RatMatrix> a(m, RatMatrix::identity(1)), b(n, RatMatrix::identity(1));
    const PairingKernel k = pairing_kernel(PairingData{a, b, p});
    CHECK(k.quotient_dim == rank(p));
    CHECK(k.kernel.size() + rank(p) == m);
    for (const auto& v : k.kernel)
      for (std::size_t j = 0; j < n; ++j) {
        Rational s(0);
        for (std::size_t i = 0; i < m; ++i) s += v[i] * p(i, j);
        CHECK(s == Rational(0));
      }
  }
}

TEST_CASE("semisimplicity certificates") {
  RatMatrix cycle(3, 3);
  cycle(1, 0) = cycle(2, 1) = cycle(0, 2) = 1;
  const auto z3 = certify_semisimple(close_algebra({cycle}, true));
  CHECK(z3.semisimple);
  REQUIRE(z3.gram_determinant.has_value());
  CHECK(*z3.gram_determinant != Rational(0));

  const auto upper = certify_semisimple(close_algebra({e2(0, 0), e2(0, 1), e2(1, 1)}, true));
  CHECK_FALSE(upper.semisimple);
  REQUIRE(upper.witness.has_value());
  CHECK(*upper.witness == e2(0, 1));

  CHECK(certify_semisimple(close_algebra({e2(0, 1), e2(1, 0)}, false)).semisimple);
}

TEST_CASE("semisimple quotients") {
  const QuotientResult upper = num_equiv_quotient(close_algebra({e2(0, 0), e2(0, 1), e2(1, 1)}, true));
  CHECK(upper.algebra.dim() == 2);
  CHECK(upper.radical_dim == 1);
  CHECK(upper.certificate.semisimple);
  CHECK(upper.traces_rational);
  // Q x Q: commutative with two orthogonal idempotents.
  const auto& b = upper.algebra.basis();
  CHECK(b[0] * b[1] == b[1] * b[0]);

  const MatrixAlgebra m2 = close_algebra({e2(0, 1), e2(1, 0)}, false);
  const QuotientResult full = num_equiv_quotient(m2);
  CHECK(full.algebra.dim() == 4);
  CHECK(full.radical_dim == 0);

  const QuotientResult zero = num_equiv_quotient(close_algebra({e2(0, 1)}, false));
  CHECK(zero.algebra.dim() == 0);
  CHECK(zero.certificate.semisimple);
}

TEST_CASE("quotient is idempotent") {
  for (const auto& f : algebra_fixtures()) {
    CAPTURE(f.name);
    const QuotientResult once = num_equiv_quotient(f.algebra);
    const QuotientResult twice = num_equiv_quotient(once.algebra);
    CHECK(twice.radical_dim == 0);
    CHECK(twice.algebra.dim() == once.algebra.dim());
  }
}

TEST_CASE("trace radical matches the known radical on the fixture library") {
  const auto fixtures = algebra_fixtures();
  CHECK(fixtures.size() == 12);
  for (const auto& f : fixtures) {
    CAPTURE(f.name);
    const RadicalResult r = trace_radical(f.algebra);
    const std::size_t n = f.algebra.dim_v();
    CHECK(span_of(r.basis, n) == span_of(f.radical, n));
    CHECK(r.two_sided_ideal);
    CHECK(r.nilpotent);
    CHECK(certify_semisimple(f.algebra).semisimple == f.radical.empty());
  }
}

TEST_CASE("serial and parallel Gram matrices agree") {
  for (const auto& f : algebra_fixtures()) {
    CAPTURE(f.name);
    CHECK(kernels::trace_gram(f.algebra.basis(), kernels::Exec::serial) ==
          kernels::trace_gram(f.algebra.basis(), kernels::Exec::parallel));
  }
}
