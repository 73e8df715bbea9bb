#include <random>

#include "doctest.h"
#include "katofan/curve.hpp"
#include "katofan/errors.hpp"

using namespace katofan;

namespace {

using E = DualGraph::Edge;

DualGraph tate() { return DualGraph::make({0}, {E{0, 0, 1}}); }
DualGraph banana() { return DualGraph::make({0, 0}, {E{0, 1, 1}, E{0, 1, 1}}); }
DualGraph smooth(int g) { return DualGraph::make({g}, {}); }

// Connected multigraph: a random spanning tree plus extra edges and loops.
DualGraph random_connected(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 8), gd(0, 2), len(1, 4);
  const int v = nv(rng);
  std::vector<int> genus(v);
  for (auto& g : genus) g = gd(rng);
  std::vector<E> edges;
  for (int i = 1; i < v; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    edges.push_back(E{static_cast<std::size_t>(parent(rng)), static_cast<std::size_t>(i), len(rng)});
  }
  std::uniform_int_distribution<int> extra(0, 14 - (v - 1)), end(0, v - 1);
  for (int k = extra(rng); k > 0; --k)
    edges.push_back(E{static_cast<std::size_t>(end(rng)), static_cast<std::size_t>(end(rng)), len(rng)});
  return DualGraph::make(genus, edges);
}

RatVec unit(std::size_t n, std::size_t i) {
  RatVec v(n);
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("dual graph validation") {
  CHECK_THROWS_AS(DualGraph::make({-1}, {}), InvalidInput);
  CHECK_THROWS_AS(DualGraph::make({0}, {E{0, 0, 0}}), InvalidInput);
  CHECK_THROWS_AS(DualGraph::make({0}, {E{0, 1, 1}}), InvalidInput);
  CHECK(DualGraph::make({0, 0}, {}).components() == 2);
  CHECK(banana().connected());
}

TEST_CASE("cycle space") {
  CHECK(cycle_space(DualGraph::make({0, 0, 0}, {E{0, 1, 1}, E{1, 2, 1}})).empty());
  const auto b = cycle_space(banana());
  REQUIRE(b.size() == 1);
  CHECK((b[0] == Vec{1, -1} || b[0] == Vec{-1, 1}));
  CHECK(cycle_space(tate()).size() == 1);
  CHECK(cycle_space(smooth(3)).empty());
}

TEST_CASE("monodromy pairing") {
  CHECK(monodromy_pairing(DualGraph::make({0, 0}, {E{0, 1, 1}})).rows() == 0);
  CHECK(monodromy_pairing(banana()) == IntMatrix::from_rows({{2}}));
  CHECK(monodromy_pairing(tate()) == IntMatrix::from_rows({{1}}));
  CHECK(monodromy_pairing(DualGraph::make({0}, {E{0, 0, 5}})) == IntMatrix::from_rows({{5}}));
  CHECK(monodromy_pairing(DualGraph::make({0, 0}, {E{0, 1, 2}, E{0, 1, 3}})) == IntMatrix::from_rows({{5}}));
}

TEST_CASE("log Jacobian motifs") {
  const Log1Motif t = log_jacobian_motif(tate());
  CHECK(t.graded_dims == std::map<int, int>{{-2, 1}, {-1, 0}, {0, 1}});
  CHECK(t.total_dim() == 2);
  CHECK(t.consistent());

  const Log1Motif s = log_jacobian_motif(smooth(2));
  CHECK(s.graded_dims == std::map<int, int>{{-2, 0}, {-1, 4}, {0, 0}});
  CHECK(s.total_dim() == 4);

  CHECK(log_jacobian_motif(banana()).graded_dims == std::map<int, int>{{-2, 1}, {-1, 0}, {0, 1}});
  CHECK(log_jacobian_motif(banana()).warnings.empty());
  CHECK(log_jacobian_motif(DualGraph::make({1, 0}, {})).warnings.size() == 1);
}

TEST_CASE("polarization conditions") {
  const Log1Motif m = log_jacobian_motif(DualGraph::make({0, 0, 0}, {E{0, 1, 1}, E{1, 2, 1}, E{2, 0, 1}, E{0, 1, 2}}));
  REQUIRE(m.gamma_rank == 2);
  const IntMatrix id = IntMatrix::identity(2);
  CHECK(polarization_check(m, id).ok());

  const PolarizationReport zero = polarization_check(m, IntMatrix(2, 2));
  CHECK_FALSE(zero.invertible);
  CHECK_FALSE(zero.ok());

  const PolarizationReport neg = polarization_check(m, scaled(Int{-1}, id));
  CHECK(neg.invertible);
  CHECK(neg.symmetric);
  CHECK_FALSE(neg.positive_definite);

  CHECK_FALSE(polarization_check(m, id, false, true).ok());
  CHECK_THROWS_AS(polarization_check(m, IntMatrix::identity(3)), DimensionMismatch);
  CHECK(polarization_check(log_jacobian_motif(smooth(1)), IntMatrix(0, 0)).ok());
}

TEST_CASE("monodromy operator") {
  const FilteredNilpotentOperator s = monodromy_operator(log_jacobian_motif(smooth(2)));
  CHECK(s.dim() == 4);
  CHECK(s.n.is_zero());

  const FilteredNilpotentOperator t = monodromy_operator(log_jacobian_motif(tate()));
  CHECK(t.n == RatMatrix::from_rows({{0, 1}, {0, 0}}));
  CHECK((t.n * t.n).is_zero());

  const FilteredNilpotentOperator b = monodromy_operator(log_jacobian_motif(banana()));
  CHECK(b.n == RatMatrix::from_rows({{0, 2}, {0, 0}}));
}

TEST_CASE("monodromy filtration") {
  SUBCASE("zero operator is concentrated at the center") {
    FilteredNilpotentOperator f{RatMatrix(3, 3), Filtration{0, {Subspace::whole(3)}}, 0};
    const MonodromyComparison c = monodromy_filtration(f);
    CHECK(c.matches);
    CHECK(c.monodromy.at(-1, 3).dim() == 0);
    CHECK(c.monodromy.at(0, 3).dim() == 3);

    f.weight = Filtration{-1, {Subspace(3, {unit(3, 0)}), Subspace::whole(3)}};
    CHECK_FALSE(monodromy_filtration(f).matches);
  }
  SUBCASE("Tate curve: M = W") {
    const MonodromyComparison c = monodromy_filtration(monodromy_operator(log_jacobian_motif(tate())));
    CHECK(c.matches);
    CHECK(c.monodromy.at(-2, 2) == Subspace(2, {unit(2, 0)}));
  }
  SUBCASE("Jordan block with the wrong weights") {
    FilteredNilpotentOperator f{RatMatrix::from_rows({{0, 1}, {0, 0}}), Filtration{0, {Subspace::whole(2)}}, 0};
    const MonodromyComparison c = monodromy_filtration(f);
    CHECK_FALSE(c.matches);
    REQUIRE(c.witness_weight.has_value());
    CHECK(*c.witness_weight == -1);
  }
  SUBCASE("three-step Jordan block ladder") {
    // e0 <- e1 <- e2 under N: weights -2, 0, 2.
    FilteredNilpotentOperator f{RatMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}), Filtration{}, 0};
    const MonodromyComparison c = monodromy_filtration(f);
    CHECK(c.monodromy.at(-3, 3).dim() == 0);
    CHECK(c.monodromy.at(-2, 3).dim() == 1);
    CHECK(c.monodromy.at(-1, 3).dim() == 1);
    CHECK(c.monodromy.at(0, 3).dim() == 2);
    CHECK(c.monodromy.at(1, 3).dim() == 2);
    CHECK(c.monodromy.at(2, 3).dim() == 3);
  }
  SUBCASE("not nilpotent") {
    FilteredNilpotentOperator f{RatMatrix::identity(2), Filtration{}, 0};
    CHECK_THROWS_AS(monodromy_filtration(f), NotNilpotent);
  }
}

TEST_CASE("punctured H1") {
  CHECK_THROWS_AS(punctured_h1(tate(), 0), InvalidPunctureCount);
  const PuncturedH1 one = punctured_h1(banana(), 1);
  CHECK(one.closed == log_jacobian_motif(banana()));
  CHECK(one.total_dim() == log_jacobian_motif(banana()).total_dim());
  CHECK(punctured_h1(smooth(1), 2).total_dim() == 3);
  CHECK(punctured_h1(tate(), 3).total_dim() == 4);
  CHECK(punctured_h1(tate(), 3).extension_class != "none");
}

TEST_CASE("random multigraphs: rank, positivity, self-duality and M = W") {
  std::mt19937_64 rng(1729);
  for (int trial = 0; trial < 60; ++trial) {
    const DualGraph g = random_connected(rng);
    CAPTURE(trial);
    const std::size_t rank_b = smith_invariants(g.incidence()).size();
    const std::size_t r = cycle_space(g).size();
    CHECK(r == g.edges.size() - rank_b);
    CHECK(r == g.edges.size() - g.vertex_count() + g.components());

    const Log1Motif m = log_jacobian_motif(g);
    CHECK(m.consistent());
    CHECK(m.graded_dims.at(0) == m.graded_dims.at(-2));
    const PolarizationReport p = polarization_check(m, IntMatrix::identity(r));
    CHECK(p.positive_definite);
    CHECK(p.ok());

    const FilteredNilpotentOperator f = monodromy_operator(m);
    CHECK((f.n * f.n).is_zero());
    CHECK(rank(f.n) == r);
    CHECK(monodromy_filtration(f).matches);
    CHECK(punctured_h1(g, 1).total_dim() == m.total_dim());
  }
}

TEST_CASE("disconnected graphs still satisfy the rank formula") {
  const DualGraph g = DualGraph::make({0, 0, 1, 0}, {E{0, 1, 1}, E{0, 1, 1}, E{2, 3, 1}, E{3, 3, 2}});
  CHECK(g.components() == 2);
  CHECK(cycle_space(g).size() == 2);
  CHECK(polarization_check(log_jacobian_motif(g), IntMatrix::identity(2)).ok());
}
