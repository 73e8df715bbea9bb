#include <random>
#include <set>

#include "doctest.h"
#include "katofan/cone.hpp"
#include "katofan/lattice.hpp"

using namespace katofan;

namespace {

// Faces found by sweeping integer functionals in a box.
std::set<std::vector<std::size_t>> brute_force_faces(const RationalCone& c, Int bound) {
  std::set<std::vector<std::size_t>> out;
  const int n = c.ambient_rank();
  Vec h(static_cast<std::size_t>(n), -bound);
  while (true) {
    bool ok = true;
    for (const Vec& r : c.rays()) ok = ok && dot(h, r) >= 0;
    if (ok) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < c.rays().size(); ++i)
        if (dot(h, c.rays()[i]) == 0) s.push_back(i);
      out.insert(s);
    }
    int k = 0;
    while (k < n && h[k] == bound) h[k++] = -bound;
    if (k == n) break;
    ++h[k];
  }
  return out;
}

}  // namespace

TEST_CASE("dual cone examples") {
  const RationalCone q(2, {{1, 0}, {0, 1}});
  CHECK(dual_cone(q) == q);
  const RationalCone c(2, {{1, 0}, {1, 2}});
  CHECK(dual_cone(c).rays() == std::vector<Vec>{{0, 1}, {2, -1}});
  const RationalCone zero(2, {});
  CHECK(dual_cone(zero).rays() == std::vector<Vec>{{-1, 0}, {0, -1}, {0, 1}, {1, 0}});
  CHECK(zero.dim() == 0);
}

TEST_CASE("faces of simplicial and square cones") {
  CHECK(faces(RationalCone(2, {{1, 0}, {1, 2}})).faces.size() == 4);
  CHECK(faces(RationalCone(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).faces.size() == 8);
  const RationalCone square(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}});
  const auto lat = faces(square);
  CHECK(lat.faces.size() == 10);
  std::set<std::vector<std::size_t>> got;
  for (const auto& f : lat.faces) got.insert(f.ray_indices);
  CHECK(got == brute_force_faces(square, 2));
  for (const auto& f : lat.faces)
    for (const Vec& r : square.rays()) CHECK(dot(f.functional, r) >= 0);
  CHECK_THROWS_AS(faces(RationalCone(2, {{1, 0}, {-1, 0}})), NotStronglyConvex);
}

TEST_CASE("strong convexity") {
  CHECK(is_strongly_convex(RationalCone(2, {{1, 0}, {0, 1}})));
  CHECK(!is_strongly_convex(RationalCone(2, {{1, 0}, {-1, 0}})));
  CHECK(!is_strongly_convex(RationalCone(2, {{1, 0}, {-1, 0}, {0, 1}})));
}

TEST_CASE("multiplicity") {
  CHECK(multiplicity(RationalCone(2, {{1, 0}, {0, 1}})) == 1);
  CHECK(multiplicity(RationalCone(2, {{1, 0}, {1, 2}})) == 2);
  CHECK(multiplicity(RationalCone(2, {{1, 0}, {1, 3}})) == 3);
  CHECK(multiplicity(RationalCone(3, {{1, 0, 0}, {1, 2, 0}})) == 2);
  CHECK_THROWS_AS(multiplicity(RationalCone(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}})), NotSimplicial);
}

TEST_CASE("containment modes") {
  const RationalCone q(2, {{1, 0}, {0, 1}});
  CHECK(q.contains(Vec{2, 3}));
  CHECK(!q.contains(Vec{1, 0}, Containment::relative_interior));
  CHECK(RationalCone(2, {{1, 0}, {1, 2}}).contains(Vec{1, 1}, Containment::relative_interior));
  const RationalCone ray(2, {{1, 1}});
  CHECK(ray.contains(Vec{2, 2}, Containment::relative_interior));
  CHECK(!ray.contains(Vec{2, 1}));
}

TEST_CASE("parallelepiped points") {
  CHECK(parallelepiped_points(RationalCone(2, {{1, 0}, {1, 2}})) == std::vector<Vec>{{1, 1}});
  CHECK(parallelepiped_points(RationalCone(2, {{1, 0}, {1, 3}})) == std::vector<Vec>{{1, 1}, {1, 2}});
  CHECK(parallelepiped_points(RationalCone(2, {{1, 0}, {0, 1}})).empty());
}

TEST_CASE("pulling triangulation covers the square cone") {
  const RationalCone square(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}});
  const auto t = triangulate(square);
  CHECK(t.size() == 2);
  for (const auto& s : t) CHECK(s.size() == 3);
}

TEST_CASE("monoid of a cone") {
  CHECK(monoid_of_cone(RationalCone(2, {{1, 0}, {0, 1}})).hilbert_basis == std::vector<Vec>{{0, 1}, {1, 0}});
  CHECK(monoid_of_cone(RationalCone(2, {{1, 0}, {1, 2}})).hilbert_basis == std::vector<Vec>{{0, 1}, {1, 0}, {2, -1}});
  const auto half = monoid_of_cone(RationalCone(2, {{1, 1}})).hilbert_basis;
  for (const Vec& h : half) CHECK(h[0] + h[1] >= 0);
  CHECK(std::count(half.begin(), half.end(), Vec{1, -1}) == 1);
  CHECK(std::count(half.begin(), half.end(), Vec{-1, 1}) == 1);
}

TEST_CASE("duality is an involution on random cones") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(-3, 3);
  int checked = 0;
  while (checked < 60) {
    const int n = 2 + checked % 2;
    std::vector<Vec> gens;
    for (int i = 0; i < n + 1; ++i) {
      Vec v(n);
      for (auto& x : v) x = coord(rng);
      gens.push_back(v);
    }
    const RationalCone c(n, gens);
    if (!c.is_strongly_convex()) continue;
    CHECK(dual_cone(dual_cone(c)) == c);
    const RationalCone d = dual_cone(c);
    for (const Vec& h : d.rays())
      for (const Vec& r : c.rays()) CHECK(dot(h, r) >= 0);
    ++checked;
  }
}
