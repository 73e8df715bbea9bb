#include <set>

#include "doctest.h"
#include "katofan/fan.hpp"

using namespace katofan;

namespace {

IntMatrix rows(std::vector<Vec> r, std::size_t cols = 0) { return IntMatrix::from_rows(r, cols); }

std::vector<Vec> standard_basis(int n) {
  std::vector<Vec> b;
  for (int i = 0; i < n; ++i) b.push_back(unit_vector(n, i));
  return b;
}

Stalk free_stalk(int n, std::vector<std::string> labels = {}) { return Stalk::make(n, standard_basis(n), labels); }

RationalCone cone(int n, std::vector<Vec> gens) { return RationalCone(n, std::move(gens)); }

// Two N^4 charts glued through u and v; the v gluing swaps x3 and x4.
MonoidalSpace asfan2() {
  using P = MonoidalSpace::Point;
  using E = MonoidalSpace::Edge;
  std::vector<P> pts{
      P{"p", free_stalk(4, {"x₁", "x₂", "x₃", "x₄"}), true},
      P{"p'", free_stalk(4, {"x'₁", "x'₂", "x'₃", "x'₄"}), true},
      P{"u", free_stalk(3, {"x₂", "x₃", "x₄"}), false},
      P{"v", free_stalk(3, {"x₁", "x₃", "x₄"}), false},
  };
  const IntMatrix kill1 = rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  const IntMatrix kill2 = rows({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  const IntMatrix kill2_swap = rows({{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  return MonoidalSpace(pts, {E{0, 2, kill1}, E{1, 2, kill1}, E{0, 3, kill2}, E{1, 3, kill2_swap}});
}

// Two copies of Spec N^2 glued along both coordinate axes.
MonoidalSpace control() {
  using P = MonoidalSpace::Point;
  using E = MonoidalSpace::Edge;
  std::vector<P> pts{
      P{"p", free_stalk(2, {"x", "y"}), true},
      P{"p'", free_stalk(2, {"x'", "y'"}), true},
      P{"u", free_stalk(1), false},
      P{"v", free_stalk(1), false},
  };
  const IntMatrix to_u = rows({{0, 1}});
  const IntMatrix to_v = rows({{1, 0}});
  return MonoidalSpace(pts, {E{0, 2, to_u}, E{1, 2, to_u}, E{0, 3, to_v}, E{1, 3, to_v}});
}

}  // namespace

TEST_CASE("stalk normalizes to the Hilbert basis and keeps labels") {
  const Stalk s = Stalk::make(2, {{1, 1}, {0, 1}, {1, 0}}, {"c", "b", "a"});
  CHECK(s.generators == std::vector<Vec>{{0, 1}, {1, 0}});
  CHECK(s.labels == std::vector<std::string>{"b", "a"});
  CHECK_THROWS_AS(Stalk::make(1, {{2}}), InvalidInput);
  CHECK_THROWS_AS(Stalk::make(1, {{1}, {-1}}), NotSharp);
  CHECK_THROWS_AS(Stalk::make(1, {{2}, {3}}), InvalidInput);
}

TEST_CASE("localization maps") {
  const Stalk n2 = free_stalk(2);
  const Stalk n1 = free_stalk(1);
  CHECK(is_localization_map(n2, n1, rows({{0, 1}})));
  CHECK_FALSE(is_localization_map(n2, n1, rows({{1, 1}})));
  CHECK(is_localization_map(n2, Stalk::make(0, {}), IntMatrix(0, 2)));
  CHECK(is_localization_map(n2, n2, IntMatrix::identity(2)));
  CHECK_FALSE(is_localization_map(n2, n1, rows({{2, 0}})));
}

TEST_CASE("spec of N^2 is a four point fan") {
  const KatoFan k = spec_to_space(free_stalk(2));
  REQUIRE(k.space.size() == 4);
  CHECK(k.space.point(0).name == "prime()");
  CHECK(k.space.point(3).name == "prime((0,1),(1,0))");
  CHECK(k.space.neighborhood(3).size() == 4);
  CHECK(k.space.neighborhood(0) == std::vector<std::size_t>{0});
  CHECK(is_fan(k.space).ok);
  CHECK(k.charts.size() == 4);
  // Stalk at the height-one primes is N.
  CHECK(k.space.stalk(1).rank == 1);
}

TEST_CASE("spec of a non-simplicial monoid") {
  const AffineMonoid m(3, {{1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 1}});
  const KatoFan k = spec_to_space(m);
  CHECK(k.space.size() == 10);  // 1 + 4 + 4 + 1 faces of the square cone
  CHECK(is_fan(k.space).ok);
  CHECK_THROWS_AS(spec_to_space(AffineMonoid(1, {{1}, {-1}})), NotSharp);
}

TEST_CASE("is_fan rejects a space missing a generization") {
  const KatoFan k = spec_to_space(free_stalk(2));
  std::vector<MonoidalSpace::Point> pts(k.space.points().begin(), k.space.points().end());
  std::vector<MonoidalSpace::Edge> edges;
  // Drop point 1 (a height-one prime) and every edge touching it.
  pts.erase(pts.begin() + 1);
  for (auto e : k.space.edges()) {
    if (e.special == 1 || e.generic == 1) continue;
    if (e.special > 1) --e.special;
    if (e.generic > 1) --e.generic;
    edges.push_back(e);
  }
  // The closed point lost its only path to prime(); add the direct map back.
  edges.push_back(MonoidalSpace::Edge{2, 0, IntMatrix(0, 2)});
  const MonoidalSpace broken(pts, edges);
  const FanCheck c = is_fan(broken);
  CHECK_FALSE(c.ok);
  REQUIRE(c.failing_point.has_value());
  CHECK(*c.failing_point == 2);
}

TEST_CASE("monoidal space rejects bad generization data") {
  using P = MonoidalSpace::Point;
  using E = MonoidalSpace::Edge;
  const std::vector<P> pts{P{"a", free_stalk(2), true}, P{"b", free_stalk(1), false}};
  CHECK_THROWS_AS(MonoidalSpace(pts, {E{0, 1, rows({{1, 1}})}}), InvalidInput);
  CHECK_THROWS_AS(MonoidalSpace(pts, {E{0, 1, rows({{1, 0, 0}})}}), InvalidInput);
  CHECK_THROWS_AS(MonoidalSpace({P{"a", free_stalk(1)}, P{"a", free_stalk(1)}}, {}), InvalidInput);
  const MonoidalSpace ok(pts, {E{0, 1, rows({{1, 0}})}});
  CHECK(ok.generizes(1, 0));
  CHECK_FALSE(ok.generizes(0, 1));
  CHECK_THROWS_AS(ok.map(1, 0), InvalidInput);
}

TEST_CASE("rational fans") {
  const RationalFan p2 = RationalFan::generated_by(
      2, {cone(2, {{1, 0}, {0, 1}}), cone(2, {{0, 1}, {-1, -1}}), cone(2, {{-1, -1}, {1, 0}})});
  CHECK(p2.cones.size() == 7);
  CHECK(p2.rays().size() == 3);
  CHECK(p2.maximal_cones().size() == 3);
  CHECK(validate_rational_fan(p2).valid);
  CHECK(p2.in_support({-3, 5}));

  const RationalFan bad = RationalFan::generated_by(2, {cone(2, {{1, 0}, {0, 1}}), cone(2, {{1, 1}, {-1, 1}})});
  const FanReport r = validate_rational_fan(bad);
  CHECK_FALSE(r.valid);
  CHECK(r.pair.has_value());
  CHECK_THROWS_AS(rational_to_kato(bad), InvalidFan);

  const RationalFan missing_face = RationalFan::from_cones(2, {cone(2, {{1, 0}, {0, 1}})});
  CHECK_FALSE(validate_rational_fan(missing_face).valid);

  const KatoFan k = rational_to_kato(p2);
  CHECK(k.space.size() == 7);
  CHECK(is_fan(k.space).ok);
}

TEST_CASE("P^1 as a Kato fan") {
  const RationalFan p1 = RationalFan::generated_by(1, {cone(1, {{1}}), cone(1, {{-1}})});
  const KatoFan k = rational_to_kato(p1);
  REQUIRE(k.space.size() == 3);
  const auto origin = k.space.index_of("cone()");
  REQUIRE(origin.has_value());
  CHECK(k.space.stalk(*origin).rank == 0);
  CHECK(k.space.neighborhood(*origin).size() == 1);
  for (std::size_t i = 0; i < 3; ++i)
    if (i != *origin) CHECK(k.space.generizes(*origin, i));
}

TEST_CASE("non-simplicial rational cone gives the expected stalk") {
  const RationalFan f = RationalFan::generated_by(3, {cone(3, {{1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 1, 1}})});
  const KatoFan k = rational_to_kato(f);
  CHECK(k.space.size() == 10);
  const auto top = k.space.index_of("cone((0,1,0),(0,1,1),(1,0,0),(1,0,1))");
  REQUIRE(top.has_value());
  CHECK(k.space.stalk(*top).generators.size() == 4);
}

TEST_CASE("strict morphisms") {
  auto x = std::make_shared<const MonoidalSpace>(spec_to_space(free_stalk(2)).space);
  CHECK(is_strict(identity_morphism(x)));
  validate_morphism(identity_morphism(x));

  // One point with stalk N over the closed point of Spec N^2 by (a,b) -> a+b.
  auto pt = std::make_shared<const MonoidalSpace>(
      std::vector<MonoidalSpace::Point>{{"x", free_stalk(1), true}}, std::vector<MonoidalSpace::Edge>{});
  FanMorphism f{pt, x, {3}, {rows({{1, 1}})}};
  validate_morphism(f);
  CHECK_FALSE(is_strict(f));

  FanMorphism not_local{pt, x, {3}, {rows({{1, 0}})}};
  CHECK_THROWS_AS(validate_morphism(not_local), InvalidInput);
  CHECK(compose(identity_morphism(x), f).stalk_maps == f.stalk_maps);
}

TEST_CASE("Spec and global sections are inverse on Hom(N^2, N^2)") {
  const Stalk n2 = free_stalk(2);
  int checked = 0;
  for (Int a = 0; a <= 2; ++a)
    for (Int b = 0; b <= 2; ++b)
      for (Int c = 0; c <= 2; ++c)
        for (Int d = 0; d <= 2; ++d) {
          const IntMatrix phi = rows({{a, b}, {c, d}});
          const FanMorphism f = spec_morphism(n2, n2, phi);
          validate_morphism(f);
          CHECK(global_sections(f) == phi);
          // Strict exactly when phi permutes the generators.
          const bool permutation = (a == 1 && d == 1 && b == 0 && c == 0) || (a == 0 && d == 0 && b == 1 && c == 1);
          CHECK(is_strict(f) == permutation);
          ++checked;
        }
  CHECK(checked == 81);
}

TEST_CASE("Spec of a map N -> N^2") {
  const FanMorphism f = spec_morphism(free_stalk(1), free_stalk(2), rows({{1}, {1}}));
  validate_morphism(f);
  // Only the generic point of Spec N^2 maps to the generic point of Spec N.
  std::size_t generic = 0;
  for (std::size_t p : f.point_map) generic += p == 0;
  CHECK(generic == 1);
  CHECK(global_sections(f) == rows({{1}, {1}}));
}

TEST_CASE("associated fan of Spec N^4 is itself") {
  const KatoFan k = spec_to_space(free_stalk(4, {"x₁", "x₂", "x₃", "x₄"}));
  const AssociatedFan a = build_associated_fan(k.space, AssocMode::log_regular);
  REQUIRE(a.ok());
  CHECK(a.fan->space.size() == 16);
  CHECK(is_strict(*a.morphism));
  std::set<std::size_t> image(a.morphism->point_map.begin(), a.morphism->point_map.end());
  CHECK(image.size() == 16);
}

TEST_CASE("swapped gluing is obstructed") {
  const AssociatedFan a = build_associated_fan(asfan2(), AssocMode::over_standard_log_point);
  REQUIRE_FALSE(a.ok());
  CHECK(a.obstruction->chart == "p");
  CHECK(a.obstruction->message == "prime(x₃) identified with prime(x₄) at p");
  CHECK_FALSE(build_associated_fan(asfan2(), AssocMode::log_regular).ok());
}

TEST_CASE("untwisted gluing succeeds") {
  for (AssocMode mode : {AssocMode::log_regular, AssocMode::over_standard_log_point}) {
    const AssociatedFan a = build_associated_fan(control(), mode);
    REQUIRE(a.ok());
    CHECK(a.fan->space.size() == 5);
    CHECK(is_fan(a.fan->space).ok);
    CHECK(is_strict(*a.morphism));
    const auto& f = *a.morphism;
    CHECK(a.fan->space.point(f.point_map[2]).name == "u");
    CHECK(a.fan->space.point(f.point_map[3]).name == "v");
    CHECK(f.point_map[0] != f.point_map[1]);
    if (mode == AssocMode::over_standard_log_point) {
      const auto eta = a.fan->space.index_of("η");
      REQUIRE(eta.has_value());
      CHECK(a.fan->space.stalk(*eta).rank == 0);
    }
  }
}
