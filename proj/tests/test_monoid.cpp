#include <set>

#include "doctest.h"
#include "katofan/monoid.hpp"

using namespace katofan;

namespace {

// All ideal-complement faces of a sharp monoid: subsets of the Hilbert basis
// closed under "a + b in face implies a, b in face", checked on bounded sums.
std::set<std::vector<std::size_t>> brute_force_primes(const std::vector<Vec>& hb) {
  std::set<std::vector<std::size_t>> out;
  const std::size_t m = hb.size();
  const RationalCone cone(static_cast<int>(hb.front().size()), hb);
  for (std::size_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::size_t> s;
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        s.push_back(i);
        gens.push_back(hb[i]);
      }
    // The complement ideal is prime iff cone(gens) meets the monoid only in
    // sums of gens: no excluded generator lies in the span of the face, and
    // the face is extremal (a + b in the face forces a, b there).
    const RationalCone f(cone.ambient_rank(), gens);
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i)
      for (std::size_t j = i; j < m && ok; ++j) {
        const bool in_i = mask & (1u << i), in_j = mask & (1u << j);
        if (in_i && in_j) continue;
        if (f.contains(add(hb[i], hb[j]))) ok = false;
      }
    for (std::size_t i = 0; i < m && ok; ++i)
      if (!(mask & (1u << i)) && f.contains(hb[i])) ok = false;
    if (ok) out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("saturate") {
  const AffineMonoid n2(2, {{1, 0}, {0, 1}});
  CHECK(saturate(n2).generators() == n2.generators());
  const AffineMonoid num(1, {{2}, {3}});
  CHECK(saturate(num).generators() == std::vector<Vec>{{1}});
  CHECK(!is_saturated(num));
  // gp = Z x 2Z, so (1,1) is not in the saturation; it is in the normalization in Z^2.
  const AffineMonoid m(2, {{1, 0}, {1, 2}});
  CHECK(saturate(m).generators() == m.generators());
  CHECK(hilbert_basis(m.generators(), {{1, 0}, {0, 1}}, 2) == std::vector<Vec>{{1, 0}, {1, 1}, {1, 2}});
  const AffineMonoid m3(2, {{1, 0}, {1, 2}, {0, 1}});
  CHECK(saturate(m3).generators() == std::vector<Vec>{{0, 1}, {1, 0}});
  CHECK(is_saturated(saturate(m)));
  CHECK(same_monoid(saturate(saturate(m)), saturate(m)));
}

TEST_CASE("groupify") {
  CHECK(groupify(AffineMonoid(2, {{1, 0}, {0, 1}})).rank() == 2);
  const auto g = groupify(AffineMonoid(1, {{2}, {3}}));
  CHECK(g.rank() == 1);
  CHECK(g.basis == std::vector<Vec>{{1}});
  CHECK(groupify(AffineMonoid(3, {})).rank() == 0);
}

TEST_CASE("units and sharpening") {
  const auto a = units_and_sharpen(AffineMonoid(2, {{1, 0}, {0, 1}}));
  CHECK(a.unit_basis.empty());
  CHECK(a.sharp.ambient_rank() == 2);
  const auto b = units_and_sharpen(AffineMonoid(2, {{1, 0}, {-1, 0}, {0, 1}}));
  CHECK(b.unit_basis.size() == 1);
  CHECK(b.sharp.ambient_rank() == 1);
  CHECK(b.sharp.generators().size() == 1);
  CHECK(is_sharp(b.sharp));
  const auto z = units_and_sharpen(AffineMonoid(1, {{1}, {-1}}));
  CHECK(z.sharp.ambient_rank() == 0);
  CHECK(z.sharp.generators().empty());
}

TEST_CASE("membership in non-saturated monoids") {
  const AffineMonoid num(1, {{2}, {3}});
  CHECK(!contains(num, Vec{1}));
  CHECK(contains(num, Vec{5}));
  CHECK(contains(num, Vec{4}));
  const AffineMonoid m(2, {{1, 0}, {1, 2}});
  CHECK(!contains(m, Vec{1, 1}));
  CHECK(contains(m, Vec{2, 2}));
  const AffineMonoid withunits(2, {{2, 0}, {-2, 0}, {1, 1}});
  CHECK(contains(withunits, Vec{-1, 1}));
  CHECK(!contains(withunits, Vec{1, 0}));
}

TEST_CASE("localize") {
  const AffineMonoid n2(2, {{1, 0}, {0, 1}});
  const AffineMonoid l = localize(n2, Vec{1, 0});
  CHECK(contains(l, Vec{-1, 0}));
  CHECK(contains(l, Vec{-5, 2}));
  CHECK(!contains(l, Vec{0, -1}));
  CHECK(same_monoid(localize(n2, Vec{0, 0}), n2));
  CHECK(same_monoid(localize(AffineMonoid(1, {{1}}), Vec{1}), AffineMonoid(1, {{1}, {-1}})));
  CHECK_THROWS_AS(localize(n2, Vec{-1, 0}), ElementNotInMonoid);
  CHECK(same_monoid(localize(localize(n2, Vec{1, 0}), Vec{0, 1}), localize(n2, Vec{1, 1})));
}

TEST_CASE("spec") {
  CHECK(spec(AffineMonoid(1, {{1}})).primes.size() == 2);
  const auto s = spec(AffineMonoid(2, {{1, 0}, {0, 1}}));
  CHECK(s.primes.size() == 4);
  CHECK(s.primes.front().complement_face == std::vector<std::size_t>{0, 1});
  CHECK(s.primes.back().complement_face.empty());
  CHECK(spec(AffineMonoid(0, {})).primes.size() == 1);
  std::set<std::vector<std::size_t>> got;
  const auto t = spec(AffineMonoid(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}));
  for (const auto& p : t.primes) got.insert(p.complement_face);
  CHECK(got == brute_force_primes(t.hilbert_basis));
  CHECK(t.primes.size() == 10);
}

TEST_CASE("is_prime") {
  const AffineMonoid n2(2, {{1, 0}, {0, 1}}, true);
  CHECK(is_prime(MonoidIdeal{n2, {{1, 0}}}));
  CHECK(!is_prime(MonoidIdeal{n2, {{1, 1}}}));
  CHECK(is_prime(MonoidIdeal{n2, {}}));
  CHECK(!is_prime(MonoidIdeal{n2, {{0, 0}}}));
  CHECK_THROWS_AS(is_prime(MonoidIdeal{n2, {{-1, 0}}}), NotAnIdeal);
}

TEST_CASE("fs pushout of N -> N^2 along the diagonal and N -> N") {
  // N^2 <- N -> N, 1 |-> (1,1) and 1 |-> 1: amalgamated sum is N^2 with the
  // diagonal identified, still free of rank 2 after saturation.
  const IntMatrix f = IntMatrix::from_rows({{1}, {1}});
  const IntMatrix g = IntMatrix::from_rows({{1}});
  const auto p = fs_pushout(f, {{1, 0}, {0, 1}}, g, {{1}});
  CHECK(p.rank == 2);
  CHECK(p.generators.size() == 2);
}
