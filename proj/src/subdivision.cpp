#include "katofan/subdivision.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "katofan/lattice.hpp"

namespace katofan {

namespace {

Vec facet_sum(const RationalCone& c) {
  Vec phi(static_cast<std::size_t>(c.ambient_rank()), 0);
  for (const Vec& a : c.facets()) phi = add(phi, a);
  return phi;
}

IntMatrix as_matrix(const std::vector<Vec>& rows, std::size_t cols) { return IntMatrix::from_rows(rows, cols); }

// Integral L with r * L = I for a surjective r.
IntMatrix right_inverse(const IntMatrix& r) {
  if (r.rows() == 0) return IntMatrix(r.cols(), 0);
  const auto ker = integer_kernel(r);
  const IntMatrix s = ker.empty() ? IntMatrix::identity(r.cols())
                                  : quotient_by_span(ker, static_cast<int>(r.cols())).section;
  return s * unimodular_inverse(r * s);
}

// Cones of the stellar subdivision at v, with no shortcut for existing rays;
// at a ray this pulls the non-simplicial cones containing it.
std::vector<RationalCone> stellar_cones(const RationalFan& f, const Vec& v) {
  std::vector<RationalCone> out;
  for (const RationalCone& c : f.cones) {
    if (!c.contains(v)) {
      out.push_back(c);
      continue;
    }
    for (const Face& face : faces(c).faces) {
      if (face.cone.contains(v)) continue;
      std::vector<Vec> gens = face.cone.rays();
      gens.push_back(v);
      out.emplace_back(f.ambient_rank, gens);
    }
  }
  return out;
}

Rational simplex_volume(const std::vector<Vec>& basis, const std::vector<Vec>& rays, const Vec& phi) {
  const Int det = checked_abs(determinant(as_matrix(coordinates_in(basis, rays), basis.size())));
  Rational v(det);
  for (const Vec& r : rays) v = v / Rational(dot(phi, r));
  return v;
}

// Volume of c ∩ {phi <= 1} in the span lattice of `basis`, up to 1/d!.
Rational cone_volume(const RationalCone& c, const std::vector<Vec>& basis, const Vec& phi) {
  Rational total(0);
  const auto& rays = c.rays();
  for (const auto& simplex : triangulate(c)) {
    std::vector<Vec> rs;
    for (std::size_t i : simplex) rs.push_back(rays[i]);
    total = total + simplex_volume(basis, rs, phi);
  }
  return total;
}

}  // namespace

Subdivision Subdivision::make(RationalFan target, RationalFan source) {
  if (target.ambient_rank != source.ambient_rank) throw DimensionMismatch("fans live in different lattices");
  Subdivision s{std::move(target), std::move(source), {}};
  for (const RationalCone& c : s.source.cones) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < s.target.cones.size(); ++i)
      if (s.target.cones[i].contains(c) && (!best || s.target.cones[i].dim() < s.target.cones[*best].dim())) best = i;
    if (!best) throw NotContained(describe_cone(c) + " lies in no cone of the target fan");
    s.cone_assignment.push_back(*best);
  }
  return s;
}

Subdivision identity_subdivision(const RationalFan& f) { return Subdivision::make(f, f); }

Subdivision compose(const Subdivision& s2, const Subdivision& s1) {
  if (!(s1.source == s2.target)) throw InvalidInput("subdivisions are not composable");
  return Subdivision::make(s1.target, s2.source);
}

SubdivisionReport validate_finite_subdivision(const Subdivision& s, kernels::Exec exec) {
  SubdivisionReport r;
  const int n = s.target.ambient_rank;
  auto fail = [&](bool SubdivisionReport::*flag, std::string why) {
    r.valid = false;
    r.*flag = false;
    if (r.failure.empty()) r.failure = std::move(why);
  };

  const FanReport ft = validate_rational_fan(s.target);
  const FanReport fs = validate_rational_fan(s.source);
  if (!ft.valid || !fs.valid || s.source.ambient_rank != n) {
    fail(&SubdivisionReport::finite_fibers, "not a pair of fans in one lattice: " + (ft.valid ? fs.violation : ft.violation));
    return r;
  }
  if (s.cone_assignment.size() != s.source.cones.size()) {
    fail(&SubdivisionReport::finite_fibers, "cone assignment does not cover the source fan");
    return r;
  }
  for (std::size_t i = 0; i < s.source.cones.size(); ++i) {
    const std::size_t a = s.cone_assignment[i];
    if (a >= s.target.cones.size() || !s.target.cones[a].contains(s.source.cones[i])) {
      fail(&SubdivisionReport::finite_fibers, describe_cone(s.source.cones[i]) + " is not inside its assigned cone");
      return r;
    }
  }

  // Group maps: restriction of functionals from the span of the assigned cone.
  std::vector<SharpDual> td, sd;
  for (const auto& c : s.target.cones) td.push_back(sharp_dual(c));
  for (const auto& c : s.source.cones) sd.push_back(sharp_dual(c));
  for (std::size_t i = 0; i < s.source.cones.size(); ++i) {
    const std::size_t a = s.cone_assignment[i];
    const std::size_t d = static_cast<std::size_t>(s.source.cones[i].dim());
    if (d == 0) continue;
    const IntMatrix res = as_matrix(restriction_rows(td[a], sd[i]), static_cast<std::size_t>(s.target.cones[a].dim()));
    const auto inv = smith_invariants(res);
    if (inv.size() != d || std::any_of(inv.begin(), inv.end(), [](Int x) { return x != 1; }))
      fail(&SubdivisionReport::surjective_groups,
           "group map onto " + describe_cone(s.source.cones[i]) + " is not surjective");
  }

  // Lattice points of the box: in the target support iff in exactly one
  // relative interior of the source.
  Int maxcoord = 1;
  for (const auto* f : {&s.target, &s.source})
    for (const Vec& ray : f->rays())
      for (Int x : ray) maxcoord = std::max(maxcoord, checked_abs(x));
  r.box_bound = checked_mul(maxcoord, n + 1);
  const auto violates = [&](const Vec& x) {
    if (is_zero(x)) return false;
    const bool in_target = s.target.in_support(x);
    int hits = 0;
    for (const auto& c : s.source.cones)
      if (c.contains(x, Containment::relative_interior)) ++hits;
    return in_target != (hits > 0) || hits > 1;
  };
  if (n > 0) {
    if (auto w = kernels::box_scan(n, r.box_bound, violates, exec)) {
      r.witness = w;
      fail(&SubdivisionReport::support_bijective, "lattice point " + to_string(*w) + " breaks the support bijection");
    }
  }

  // Exact check: each target cone is the union of the full-dimensional
  // source cones assigned to it, by volume of the slice {phi <= 1}.
  for (std::size_t t = 0; t < s.target.cones.size(); ++t) {
    const RationalCone& sigma = s.target.cones[t];
    if (sigma.dim() == 0) continue;
    const Vec phi = facet_sum(sigma);
    const auto basis = sigma.span_lattice_basis();
    Rational pieces(0);
    for (std::size_t i = 0; i < s.source.cones.size(); ++i)
      if (s.cone_assignment[i] == t && s.source.cones[i].dim() == sigma.dim())
        pieces = pieces + cone_volume(s.source.cones[i], basis, phi);
    if (pieces != cone_volume(sigma, basis, phi))
      fail(&SubdivisionReport::support_bijective, describe_cone(sigma) + " is not covered by its subdivision");
  }
  return r;
}

Subdivision star_subdivide(const RationalFan& f, const Vec& v) {
  if (v.size() != static_cast<std::size_t>(f.ambient_rank)) throw DimensionMismatch("vector has the wrong length");
  if (is_zero(v) || content(v) != 1) throw InvalidInput("star center " + to_string(v) + " is not primitive");
  if (!f.in_support(v)) throw VectorOutsideSupport(to_string(v) + " is outside the support of the fan");
  const auto rays = f.rays();
  if (std::find(rays.begin(), rays.end(), v) != rays.end()) return identity_subdivision(f);
  return Subdivision::make(f, RationalFan::from_cones(f.ambient_rank, stellar_cones(f, v)));
}

Int max_multiplicity(const RationalFan& f) {
  Int m = 1;
  for (const auto& c : f.cones)
    if (c.is_simplicial()) m = std::max(m, multiplicity(c));
  return m;
}

Subdivision free_resolution(const RationalFan& f, int budget) {
  RationalFan current = f;
  int moves = 0;
  auto spend = [&] {
    if (++moves > budget)
      throw ResolutionBudgetExceeded("free resolution needs more than " + std::to_string(budget) + " stellar moves");
  };
  // Pull the smallest ray of a non-simplicial cone until everything is simplicial.
  for (;;) {
    std::optional<Vec> pull;
    for (const auto& c : current.cones)
      if (!c.is_simplicial())
        for (const Vec& r : c.rays())
          if (!pull || r < *pull) pull = r;
    if (!pull) break;
    spend();
    current = RationalFan::from_cones(current.ambient_rank, stellar_cones(current, *pull));
  }
  for (;;) {
    const Int worst = max_multiplicity(current);
    if (worst <= 1) break;
    const auto it = std::find_if(current.cones.begin(), current.cones.end(),
                                 [&](const RationalCone& c) { return multiplicity(c) == worst; });
    auto candidates = parallelepiped_points(*it);
    std::sort(candidates.begin(), candidates.end());
    if (it->dim() == 2) {
      // Continued-fraction step: the point unimodular against the first ray.
      const Vec& r0 = it->rays().front();
      const auto step = std::find_if(candidates.begin(), candidates.end(), [&](const Vec& p) {
        return !is_zero(p) && multiplicity(RationalCone(current.ambient_rank, {r0, p})) == 1;
      });
      if (step != candidates.end()) {
        spend();
        current = RationalFan::from_cones(current.ambient_rank, stellar_cones(current, *step));
        continue;
      }
    }
    std::optional<RationalFan> best;
    Int best_worst = 0;
    for (const Vec& p : candidates) {
      if (is_zero(p)) continue;
      RationalFan next = RationalFan::from_cones(current.ambient_rank, stellar_cones(current, p));
      const Int w = max_multiplicity(next);
      if (!best || w < best_worst) {
        best = std::move(next);
        best_worst = w;
      }
    }
    spend();
    current = std::move(*best);
  }
  return Subdivision::make(f, std::move(current));
}

Subdivision extract_cone_subdivision(const RationalFan& f, const RationalCone& sigma, const RationalCone& tau) {
  const int n = f.ambient_rank;
  if (!f.index_of(sigma)) throw InvalidInput(describe_cone(sigma) + " is not a cone of the fan");
  if (!tau.is_strongly_convex()) throw NotStronglyConvex(describe_cone(tau) + " is not strongly convex");
  if (!sigma.contains(tau)) throw NotContained(describe_cone(tau) + " is not inside " + describe_cone(sigma));
  if (f.index_of(tau)) return identity_subdivision(f);

  // Heights: phi on the rays of tau, zero on the other rays of the fan.
  const Vec phi = facet_sum(sigma);
  std::vector<Vec> points = f.rays();
  std::vector<Int> heights(points.size(), 0);
  for (const Vec& r : tau.rays()) {
    const auto it = std::find(points.begin(), points.end(), r);
    if (it == points.end()) {
      points.push_back(r);
      heights.push_back(dot(phi, r));
    } else {
      heights[static_cast<std::size_t>(it - points.begin())] = dot(phi, r);
    }
  }

  // Upper envelope of the lifted points over each maximal cone.
  Vec down(static_cast<std::size_t>(n + 1), 0);
  down.back() = -1;
  std::vector<RationalCone> cells;
  for (std::size_t m : f.maximal_cones()) {
    const RationalCone& cone = f.cones[m];
    std::vector<Vec> lifted{down};
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (cone.contains(points[i])) {
        Vec y = points[i];
        y.push_back(heights[i]);
        lifted.push_back(std::move(y));
        inside.push_back(i);
      }
    const RationalCone hull(n + 1, lifted);
    for (const Vec& a : hull.facets()) {
      if (dot(a, down) == 0) continue;
      std::vector<Vec> gens;
      for (std::size_t k = 0; k < inside.size(); ++k)
        if (dot(a, lifted[k + 1]) == 0) gens.push_back(points[inside[k]]);
      cells.emplace_back(n, gens);
    }
  }
  RationalFan result = RationalFan::generated_by(n, cells);
  if (!result.index_of(tau)) throw HypothesisViolated("interpolation did not cut out " + describe_cone(tau));
  return Subdivision::make(f, std::move(result));
}

RationalFan common_refinement(const RationalFan& a, const RationalFan& b) {
  if (a.ambient_rank != b.ambient_rank) throw DimensionMismatch("fans live in different lattices");
  std::vector<RationalCone> out;
  for (const auto& x : a.cones)
    for (const auto& y : b.cones) out.push_back(intersect(x, y));
  return RationalFan::from_cones(a.ambient_rank, std::move(out));
}

FiberProduct fiber_product(std::shared_ptr<const MonoidalSpace> x, const FanMorphism& f, const Subdivision& s) {
  if (!x || !f.target || f.source.get() != x.get())
    if (!x || !f.source || !(*f.source == *x)) throw InvalidInput("morphism does not start at the given space");
  if (f.target->size() != s.target.cones.size()) throw InvalidInput("morphism does not land in the target fan");
  auto kato = std::make_shared<const MonoidalSpace>(rational_to_kato(s.source).space);

  std::vector<SharpDual> td, sd;
  for (const auto& c : s.target.cones) td.push_back(sharp_dual(c));
  for (const auto& c : s.source.cones) sd.push_back(sharp_dual(c));

  struct Local {
    IntMatrix projection, section, to_fan;
  };
  std::vector<MonoidalSpace::Point> points;
  std::vector<Local> local;
  FiberProduct fp;
  for (std::size_t p = 0; p < x->size(); ++p) {
    const std::size_t t = f.point_map[p];
    const Stalk& q = x->stalk(p);
    const IntMatrix& h = f.stalk_maps[p];
    const int dt = s.target.cones[t].dim();
    for (std::size_t j = 0; j < s.source.cones.size(); ++j) {
      if (s.cone_assignment[j] != t) continue;
      // Dual of the source cone in the coordinates of the target cone's span.
      const auto coords = coordinates_in(td[t].span_basis, s.source.cones[j].rays());
      std::vector<Vec> dual_gens;
      if (dt > 0) dual_gens = monoid_of_cone(RationalCone(dt, coords)).hilbert_basis;
      std::vector<Vec> gens = q.generators;
      for (const Vec& g : dual_gens) gens.push_back(katofan::apply(h, g));
      const RationalCone c(q.rank, gens);
      const auto units = c.lineality();
      IntMatrix proj = IntMatrix::identity(static_cast<std::size_t>(q.rank)), sec = proj;
      if (!units.empty()) {
        const auto qt = quotient_by_span(units, q.rank);
        proj = qt.projection;
        sec = qt.section;
      }
      // The point exists when neither side acquires new units.
      bool ok = std::none_of(q.generators.begin(), q.generators.end(),
                             [&](const Vec& g) { return is_zero(katofan::apply(proj, g)); });
      for (const Vec& g : dual_gens) {
        const bool unit = std::all_of(coords.begin(), coords.end(), [&](const Vec& y) { return dot(g, y) == 0; });
        if (!unit && is_zero(katofan::apply(proj, katofan::apply(h, g)))) ok = false;
      }
      if (!ok) continue;
      const int k = static_cast<int>(proj.rows());
      std::vector<Vec> projected;
      for (const Vec& g : gens) {
        Vec y = katofan::apply(proj, g);
        if (!is_zero(y)) projected.push_back(std::move(y));
      }
      std::vector<Vec> id;
      for (int i = 0; i < k; ++i) id.push_back(unit_vector(k, i));
      const Stalk stalk = Stalk::make(k, hilbert_basis(projected, id, k));
      const IntMatrix res = as_matrix(restriction_rows(td[t], sd[j]), static_cast<std::size_t>(dt));
      points.push_back({x->point(p).name + "×" + describe_cone(s.source.cones[j]), stalk, x->point(p).designated});
      local.push_back({proj, sec, proj * h * right_inverse(res)});
      fp.pairs.emplace_back(p, j);
    }
  }

  std::vector<MonoidalSpace::Edge> edges;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = 0; b < points.size(); ++b) {
      if (a == b) continue;
      const auto [xa, ja] = fp.pairs[a];
      const auto [xb, jb] = fp.pairs[b];
      if (!x->generizes(xa, xb) || !is_face_of(s.source.cones[ja], s.source.cones[jb])) continue;
      edges.push_back({b, a, local[a].projection * x->map(xb, xa) * local[b].section});
    }
  fp.space = std::make_shared<const MonoidalSpace>(std::move(points), std::move(edges));
  fp.to_x.source = fp.space;
  fp.to_x.target = x;
  fp.to_fan.source = fp.space;
  fp.to_fan.target = kato;
  for (std::size_t i = 0; i < fp.pairs.size(); ++i) {
    fp.to_x.point_map.push_back(fp.pairs[i].first);
    fp.to_x.stalk_maps.push_back(local[i].projection);
    fp.to_fan.point_map.push_back(fp.pairs[i].second);
    fp.to_fan.stalk_maps.push_back(local[i].to_fan);
  }
  validate_morphism(fp.to_x);
  validate_morphism(fp.to_fan);
  return fp;
}

Strictification strictify(std::shared_ptr<const MonoidalSpace> x, const FanMorphism& f, const RationalFan& fan) {
  const int n = fan.ambient_rank;
  std::vector<RationalFan> pieces;
  for (std::size_t p = 0; p < x->size(); ++p) {
    const RationalCone& sigma = fan.cones[f.point_map[p]];
    const Stalk& q = x->stalk(p);
    const IntMatrix& h = f.stalk_maps[p];
    const SharpDual sd = sharp_dual(sigma);
    std::vector<Vec> images;
    for (const Vec& g : sd.hilbert_basis) images.push_back(katofan::apply(h, g));
    const AffineMonoid image(q.rank, images);
    for (const Vec& g : q.generators)
      if (!contains(image, g))
        throw HypothesisViolated("stalk map at '" + x->point(p).name + "' misses " + to_string(g));
    const int d = sigma.dim();
    if (d == 0) continue;
    // P = preimage of the stalk in the group of the cone's stalk; its dual
    // is the cone to extract.
    std::vector<Vec> ineqs;
    const IntMatrix ht = h.transpose();
    const RationalCone stalk_cone(q.rank, q.generators);
    for (const Vec& a : stalk_cone.facets()) ineqs.push_back(katofan::apply(ht, a));
    const RationalCone pre = RationalCone::from_inequalities(d, ineqs, {});
    std::vector<Vec> tau_rays;
    const RationalCone tau_dual = dual_cone(pre);
    for (const Vec& y : tau_dual.rays()) {
      Vec v(static_cast<std::size_t>(n), 0);
      for (std::size_t i = 0; i < y.size(); ++i) v = add(v, scale(y[i], sd.span_basis[i]));
      tau_rays.push_back(std::move(v));
    }
    const RationalCone tau(n, tau_rays);
    if (!(tau == sigma)) pieces.push_back(extract_cone_subdivision(fan, sigma, tau).source);
  }
  RationalFan refined = fan;
  for (const auto& piece : pieces) refined = common_refinement(refined, piece);
  Strictification out{Subdivision::make(fan, refined), {}, false};
  out.pulled_back = fiber_product(x, f, out.subdivision);
  out.strict = is_strict(out.pulled_back.to_fan);
  return out;
}

}  // namespace katofan
