#pragma once

// Finite subdivisions of rational fans: validation, stellar moves, free
// resolution, cone extraction by convex interpolation, strictification and
// fs fiber products of monoidal spaces over a subdivision.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "katofan/fan.hpp"
#include "katofan/kernels.hpp"

namespace katofan {

/// Sigma' -> Sigma. cone_assignment[i] is the smallest cone of the target
/// containing source cone i.
struct Subdivision {
  RationalFan target;
  RationalFan source;
  std::vector<std::size_t> cone_assignment;

  /// Computes the assignment; throws NotContained when a source cone lies in
  /// no target cone.
  static Subdivision make(RationalFan target, RationalFan source);
  bool is_identity() const { return target == source; }
};

Subdivision identity_subdivision(const RationalFan& f);
/// s2 after s1 (s1.source == s2.target).
Subdivision compose(const Subdivision& s2, const Subdivision& s1);

struct SubdivisionReport {
  bool valid = true;
  bool finite_fibers = true;      // (i-1)
  bool surjective_groups = true;  // (i-2)
  bool support_bijective = true;  // (i-3)
  std::string failure;
  std::optional<Vec> witness;  // lattice point exhibiting an (i-3) failure
  Int box_bound = 0;
};

/// Structural checks, lattice index checks per cone pair, and a box scan plus
/// exact volume accounting for the lattice-point bijection.
SubdivisionReport validate_finite_subdivision(const Subdivision& s,
                                              kernels::Exec exec = kernels::default_exec());

/// Stellar subdivision at a primitive v in the support.
Subdivision star_subdivide(const RationalFan& f, const Vec& v);

inline constexpr int kDefaultResolutionBudget = 10000;

/// Every output cone simplicial with multiplicity 1.
Subdivision free_resolution(const RationalFan& f, int budget = kDefaultResolutionBudget);

/// Largest multiplicity over the simplicial cones of f.
Int max_multiplicity(const RationalFan& f);

/// Coarsest refinement of f on whose cones the upper convex interpolation of
/// a functional positive on sigma is linear; tau is a cone of the result.
Subdivision extract_cone_subdivision(const RationalFan& f, const RationalCone& sigma, const RationalCone& tau);

/// All pairwise intersections; the fans must have equal support.
RationalFan common_refinement(const RationalFan& a, const RationalFan& b);

/// X x_Sigma Sigma' with both projections. `to_fan` lands in
/// rational_to_kato(s.source); point names are "x×cone(...)".
struct FiberProduct {
  std::shared_ptr<const MonoidalSpace> space;
  FanMorphism to_x;
  FanMorphism to_fan;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (x, source cone) per point
};

/// f must land in rational_to_kato(s.target), with points in cone order.
FiberProduct fiber_product(std::shared_ptr<const MonoidalSpace> x, const FanMorphism& f, const Subdivision& s);

struct Strictification {
  Subdivision subdivision;
  FiberProduct pulled_back;
  bool strict = false;
};

/// Throws HypothesisViolated when a stalk map is not surjective.
Strictification strictify(std::shared_ptr<const MonoidalSpace> x, const FanMorphism& f, const RationalFan& fan);

}  // namespace katofan
