#pragma once

// Rational polyhedral cones in N = Z^n: the bridge between rational fans and
// monoids. Cones carry both descriptions (rays and facet normals) computed
// exactly at construction; values are immutable afterwards.

#include <utility>
#include <vector>

#include "katofan/arith.hpp"

namespace katofan {

enum class Containment { closure, relative_interior };

class RationalCone {
 public:
  /// The zero cone in Z^0.
  RationalCone() = default;

  /// Cone generated by `generators` in Z^ambient_rank. Generators are made
  /// primitive and redundant ones dropped; the stored rays are sorted.
  RationalCone(int ambient_rank, const std::vector<Vec>& generators);

  /// {x : a.x >= 0 for a in inequalities, e.x = 0 for e in equations}.
  static RationalCone from_inequalities(int ambient_rank, const std::vector<Vec>& inequalities,
                                        const std::vector<Vec>& equations = {});

  int ambient_rank() const { return ambient_rank_; }
  int dim() const { return dim_; }

  /// Extreme rays (primitive, sorted). For a cone with lineality this is a
  /// +/- lineality basis followed by representatives of the extreme rays
  /// modulo lineality.
  const std::vector<Vec>& rays() const { return rays_; }
  /// Primitive inner facet normals, relative to the linear span.
  const std::vector<Vec>& facets() const { return facets_; }
  /// Basis of the functionals vanishing on the linear span.
  const std::vector<Vec>& equations() const { return equations_; }
  /// Basis of the lineality lattice; empty iff strongly convex.
  const std::vector<Vec>& lineality() const { return lineality_; }

  bool is_strongly_convex() const { return lineality_.empty(); }
  bool is_simplicial() const {
    return is_strongly_convex() && rays_.size() == static_cast<std::size_t>(dim_);
  }

  bool contains(const Vec& v, Containment mode = Containment::closure) const;
  /// Closure containment of another cone.
  bool contains(const RationalCone& other) const;

  /// Sum of the rays: a point of the relative interior of a strongly convex cone.
  Vec interior_point() const;

  /// Basis of span(cone) ∩ Z^n, the lattice N_sigma.
  std::vector<Vec> span_lattice_basis() const;

  friend bool operator==(const RationalCone& a, const RationalCone& b);
  /// Canonical order: by dimension, then lexicographically by rays.
  friend bool operator<(const RationalCone& a, const RationalCone& b);

 private:
  int ambient_rank_ = 0;
  int dim_ = 0;
  std::vector<Vec> rays_;
  std::vector<Vec> facets_;
  std::vector<Vec> equations_;
  std::vector<Vec> lineality_;
};

/// Rays and lineality of {h : c.h >= 0 for all c in constraints}, by the
/// double description method with algebraic adjacency tests.
struct DualDescription {
  std::vector<Vec> lineality;
  std::vector<Vec> rays;
};
DualDescription double_description(int ambient_rank, const std::vector<Vec>& constraints);

RationalCone dual_cone(const RationalCone& c);
bool is_strongly_convex(const RationalCone& c);

/// Intersection of two cones in the same lattice.
RationalCone intersect(const RationalCone& a, const RationalCone& b);

struct Face {
  RationalCone cone;
  Vec functional;                         // h >= 0 on the cone, face = cone ∩ ker h
  std::vector<std::size_t> ray_indices;   // indices into the parent's rays()
};

struct FaceLattice {
  std::vector<Face> faces;  // sorted by dimension, then ray indices
  std::vector<std::pair<std::size_t, std::size_t>> inclusions;  // (i, j): face i strictly inside face j
  std::size_t index_of(const RationalCone& c) const;           // faces.size() if absent
};

/// All faces of a strongly convex cone, from {0} to the cone itself.
FaceLattice faces(const RationalCone& c);

bool is_face_of(const RationalCone& candidate, const RationalCone& c);

/// Pulling triangulation: simplices of full dimension given as indices into c.rays().
std::vector<std::vector<std::size_t>> triangulate(const RationalCone& c);

/// |det| of the rays in a basis of the span lattice; 1 iff the cone is unimodular.
Int multiplicity(const RationalCone& c);

/// Nonzero lattice points of the half-open fundamental parallelepiped
/// {sum l_i v_i : 0 <= l_i < 1} of a simplicial cone, in the span lattice.
std::vector<Vec> parallelepiped_points(const RationalCone& c);

/// Integer coordinates of the vectors with respect to a basis of a lattice containing them.
std::vector<Vec> coordinates_in(const std::vector<Vec>& basis, const std::vector<Vec>& vectors);

// ---- monoids attached to cones -------------------------------------------

/// P_sigma = {h in Hom(N,Z) : h >= 0 on sigma} with its minimal generators.
struct DualMonoid {
  RationalCone cone;
  std::vector<Vec> hilbert_basis;
};
DualMonoid monoid_of_cone(const RationalCone& c);

/// The sharp stalk P_sigma / P_sigma^x of a strongly convex cone, written in
/// the dual coordinates of `span_basis` (a basis of N_sigma).
struct SharpDual {
  std::vector<Vec> span_basis;    // basis of N_sigma in N
  RationalCone local_cone;        // sigma in span_basis coordinates (full dimensional)
  std::vector<Vec> hilbert_basis; // generators of the sharp stalk in Z^dim
};
SharpDual sharp_dual(const RationalCone& c);

/// Restriction of functionals from N_sigma to N_tau for tau ⊆ sigma, in the
/// coordinates produced by sharp_dual: a dim(tau) x dim(sigma) matrix.
std::vector<Vec> restriction_rows(const SharpDual& sigma, const SharpDual& tau);

}  // namespace katofan
