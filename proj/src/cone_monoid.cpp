#include "katofan/cone.hpp"
#include "katofan/lattice.hpp"
#include "katofan/monoid.hpp"

namespace katofan {

namespace {

std::vector<Vec> identity_basis(int k) {
  std::vector<Vec> b;
  for (int i = 0; i < k; ++i) b.push_back(unit_vector(k, i));
  return b;
}

}  // namespace

DualMonoid monoid_of_cone(const RationalCone& c) {
  const RationalCone d = dual_cone(c);
  return DualMonoid{c, hilbert_basis(d.rays(), identity_basis(c.ambient_rank()), c.ambient_rank())};
}

SharpDual sharp_dual(const RationalCone& c) {
  if (!c.is_strongly_convex()) throw NotStronglyConvex("sharp dual needs a strongly convex cone");
  SharpDual s;
  s.span_basis = c.span_lattice_basis();
  const int k = c.dim();
  s.local_cone = RationalCone(k, coordinates_in(s.span_basis, c.rays()));
  const RationalCone d = dual_cone(s.local_cone);
  s.hilbert_basis = hilbert_basis(d.rays(), identity_basis(k), k);
  return s;
}

std::vector<Vec> restriction_rows(const SharpDual& sigma, const SharpDual& tau) {
  return coordinates_in(sigma.span_basis, tau.span_basis);
}

}  // namespace katofan
