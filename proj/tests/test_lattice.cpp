#include "doctest.h"
#include "katofan/lattice.hpp"

using namespace katofan;

TEST_CASE("hermite form is triangular with a unimodular transform") {
  const IntMatrix a = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  const auto h = hermite_rows(a);
  CHECK(h.transform * a == h.form);
  CHECK(checked_abs(determinant(h.transform)) == 1);
  CHECK(h.rank() == 3);
  CHECK(checked_abs(determinant(a)) == 2 * 6 * 12);
}

TEST_CASE("integer kernel is saturated") {
  const IntMatrix a = IntMatrix::from_rows({{2, 4}});
  const auto k = integer_kernel(a);
  REQUIRE(k.size() == 1);
  CHECK(primitive(k[0]) == k[0]);
  CHECK(dot(Vec{2, 4}, k[0]) == 0);
}

TEST_CASE("quotient by span has an integral section") {
  const auto q = quotient_by_span({Vec{2, 2, 0}}, 3);
  CHECK(q.projection.rows() == 2);
  CHECK(q.projection * q.section == IntMatrix::identity(2));
  CHECK(is_zero(apply(q.projection, Vec{1, 1, 0})));
  REQUIRE(q.kernel_basis.size() == 1);
  CHECK(primitive(q.kernel_basis[0]) == q.kernel_basis[0]);
}

TEST_CASE("smith invariants") {
  CHECK(smith_invariants(IntMatrix::from_rows({{2, 0}, {0, 3}})) == std::vector<Int>{1, 6});
  CHECK(smith_invariants(IntMatrix::from_rows({{1, 0}, {1, 2}})) == std::vector<Int>{1, 2});
  CHECK(smith_invariants(IntMatrix::from_rows({{0, 0}})).empty());
}

TEST_CASE("lattice coordinates") {
  const std::vector<Vec> basis{{1, 1}, {0, 2}};
  CHECK(lattice_coordinates(basis, Vec{1, 3}) == Vec{1, 1});
  CHECK(!lattice_coordinates(basis, Vec{1, 0}).has_value());
}

TEST_CASE("rational subspaces") {
  const Subspace a(3, {RatVec{1, 0, 0}, RatVec{0, 1, 0}});
  const Subspace b(3, {RatVec{0, 1, 0}, RatVec{0, 0, 1}});
  CHECK(a.intersect(b).dim() == 1);
  CHECK((a + b).dim() == 3);
  CHECK(a.intersect(b).contains(RatVec{0, 5, 0}));
  CHECK(!a.contains(RatVec{0, 0, 1}));
  const RatMatrix m = RatMatrix::from_rows({{1, 2}, {2, 4}});
  CHECK(rank(m) == 1);
  CHECK(kernel_space(m).dim() == 1);
  CHECK(!inverse(m).has_value());
  CHECK(determinant(RatMatrix::from_rows({{Rational(1, 2), 1}, {0, 2}})) == Rational(1));
}
