#include "katofan/cone.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "katofan/lattice.hpp"

namespace katofan {

namespace {

void sort_unique(std::vector<Vec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_size(const Vec& v, int n) {
  if (v.size() != static_cast<std::size_t>(n))
    throw DimensionMismatch("vector " + to_string(v) + " does not live in Z^" + std::to_string(n));
}

bool adjacent(const Vec& p, const Vec& q, const std::vector<Vec>& processed, int n, std::size_t lineality_dim) {
  std::vector<Vec> common;
  for (const Vec& c : processed)
    if (dot(c, p) == 0 && dot(c, q) == 0) common.push_back(c);
  if (static_cast<std::size_t>(n) < lineality_dim + 2) return false;
  const auto target = static_cast<std::size_t>(n) - lineality_dim - 2;
  if (common.size() < target) return false;
  return rank_of(common, n) == target;
}

}  // namespace

DualDescription double_description(int n, const std::vector<Vec>& constraints) {
  DualDescription d;
  for (int i = 0; i < n; ++i) d.lineality.push_back(unit_vector(n, i));
  std::vector<Vec> processed;
  for (const Vec& raw : constraints) {
    check_size(raw, n);
    if (is_zero(raw)) continue;
    const Vec c = primitive(raw);
    auto pivot = std::find_if(d.lineality.begin(), d.lineality.end(), [&](const Vec& l) { return dot(c, l) != 0; });
    if (pivot != d.lineality.end()) {
      Vec l0 = *pivot;
      Int a = dot(c, l0);
      if (a < 0) {
        l0 = negate(l0);
        a = -a;
      }
      std::vector<Vec> lin, rays;
      for (const Vec& l : d.lineality) {
        if (&l == &*pivot) continue;
        Vec w = primitive(combine(a, l, -dot(c, l), l0));
        if (!is_zero(w)) lin.push_back(std::move(w));
      }
      for (const Vec& r : d.rays) {
        Vec w = primitive(combine(a, r, -dot(c, r), l0));
        if (!is_zero(w)) rays.push_back(std::move(w));
      }
      rays.push_back(primitive(l0));
      sort_unique(rays);
      d.lineality = std::move(lin);
      d.rays = std::move(rays);
    } else {
      std::vector<Vec> pos, neg, next;
      for (const Vec& r : d.rays) {
        const Int s = dot(c, r);
        if (s >= 0) next.push_back(r);
        if (s > 0) pos.push_back(r);
        if (s < 0) neg.push_back(r);
      }
      for (const Vec& p : pos)
        for (const Vec& q : neg) {
          if (!adjacent(p, q, processed, n, d.lineality.size())) continue;
          next.push_back(primitive(combine(dot(c, p), q, -dot(c, q), p)));
        }
      sort_unique(next);
      d.rays = std::move(next);
    }
    processed.push_back(c);
  }
  return d;
}

RationalCone::RationalCone(int n, const std::vector<Vec>& generators) : ambient_rank_(n) {
  if (n < 0) throw InvalidInput("negative ambient rank");
  std::vector<Vec> gens;
  for (const Vec& g : generators) {
    check_size(g, n);
    if (!is_zero(g)) gens.push_back(primitive(g));
  }
  sort_unique(gens);

  DualDescription d = double_description(n, gens);
  equations_ = d.lineality.empty() ? std::vector<Vec>{} : lattice_basis(saturated_span_basis(d.lineality, n), n);
  facets_ = d.rays;
  sort_unique(facets_);
  dim_ = n - static_cast<int>(equations_.size());

  std::vector<Vec> constraints = facets_;
  constraints.insert(constraints.end(), equations_.begin(), equations_.end());
  const auto kernel = integer_kernel(IntMatrix::from_rows(constraints, static_cast<std::size_t>(n)));
  lineality_ = kernel.empty() ? std::vector<Vec>{} : lattice_basis(kernel, n);

  const auto target = static_cast<std::size_t>(n) - lineality_.size() - 1;
  std::set<std::vector<std::size_t>> seen;
  for (const Vec& g : gens) {
    std::vector<std::size_t> tight;
    std::vector<Vec> active = equations_;
    for (std::size_t i = 0; i < facets_.size(); ++i)
      if (dot(facets_[i], g) == 0) {
        tight.push_back(i);
        active.push_back(facets_[i]);
      }
    if (tight.size() == facets_.size()) continue;  // inside the lineality space
    if (rank_of(active, n) != target) continue;
    if (!seen.insert(tight).second) continue;
    rays_.push_back(g);
  }
  for (const Vec& l : lineality_) {
    rays_.push_back(l);
    rays_.push_back(negate(l));
  }
  sort_unique(rays_);
}

RationalCone RationalCone::from_inequalities(int n, const std::vector<Vec>& inequalities,
                                             const std::vector<Vec>& equations) {
  std::vector<Vec> constraints = inequalities;
  for (const Vec& e : equations) {
    constraints.push_back(e);
    constraints.push_back(negate(e));
  }
  const DualDescription d = double_description(n, constraints);
  std::vector<Vec> gens = d.rays;
  for (const Vec& l : d.lineality) {
    gens.push_back(l);
    gens.push_back(negate(l));
  }
  return RationalCone(n, gens);
}

bool RationalCone::contains(const Vec& v, Containment mode) const {
  check_size(v, ambient_rank_);
  for (const Vec& e : equations_)
    if (dot(e, v) != 0) return false;
  for (const Vec& f : facets_) {
    const Int s = dot(f, v);
    if (s < 0 || (s == 0 && mode == Containment::relative_interior)) return false;
  }
  return true;
}

bool RationalCone::contains(const RationalCone& other) const {
  if (other.ambient_rank_ != ambient_rank_) return false;
  return std::all_of(other.rays_.begin(), other.rays_.end(), [&](const Vec& r) { return contains(r); });
}

Vec RationalCone::interior_point() const {
  Vec p(static_cast<std::size_t>(ambient_rank_), 0);
  for (const Vec& r : rays_) p = add(p, r);
  return p;
}

std::vector<Vec> RationalCone::span_lattice_basis() const {
  if (rays_.empty()) return {};
  return lattice_basis(saturated_span_basis(rays_, ambient_rank_), ambient_rank_);
}

bool operator==(const RationalCone& a, const RationalCone& b) {
  if (a.ambient_rank_ != b.ambient_rank_ || a.dim_ != b.dim_) return false;
  if (a.is_strongly_convex() && b.is_strongly_convex()) return a.rays_ == b.rays_;
  return a.contains(b) && b.contains(a);
}

bool operator<(const RationalCone& a, const RationalCone& b) {
  if (a.ambient_rank_ != b.ambient_rank_) return a.ambient_rank_ < b.ambient_rank_;
  if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
  return a.rays_ < b.rays_;
}

RationalCone dual_cone(const RationalCone& c) {
  std::vector<Vec> gens = c.facets();
  for (const Vec& e : c.equations()) {
    gens.push_back(e);
    gens.push_back(negate(e));
  }
  return RationalCone(c.ambient_rank(), gens);
}

bool is_strongly_convex(const RationalCone& c) { return c.is_strongly_convex(); }

RationalCone intersect(const RationalCone& a, const RationalCone& b) {
  if (a.ambient_rank() != b.ambient_rank()) throw DimensionMismatch("intersecting cones of different ranks");
  std::vector<Vec> ineq = a.facets();
  ineq.insert(ineq.end(), b.facets().begin(), b.facets().end());
  std::vector<Vec> eq = a.equations();
  eq.insert(eq.end(), b.equations().begin(), b.equations().end());
  return RationalCone::from_inequalities(a.ambient_rank(), ineq, eq);
}

std::size_t FaceLattice::index_of(const RationalCone& c) const {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].cone == c) return i;
  return faces.size();
}

FaceLattice faces(const RationalCone& c) {
  if (!c.is_strongly_convex()) throw NotStronglyConvex("cone contains a line");
  const auto& rays = c.rays();
  const auto& facets = c.facets();
  std::vector<std::vector<std::size_t>> facet_sets;
  for (const Vec& f : facets) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (dot(f, rays[i]) == 0) s.push_back(i);
    facet_sets.push_back(std::move(s));
  }
  std::vector<std::size_t> all(rays.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  std::set<std::vector<std::size_t>> found{all};
  std::deque<std::vector<std::size_t>> queue{all};
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (const auto& f : facet_sets) {
      std::vector<std::size_t> t;
      std::set_intersection(s.begin(), s.end(), f.begin(), f.end(), std::back_inserter(t));
      if (found.insert(t).second) queue.push_back(std::move(t));
    }
  }

  FaceLattice lat;
  for (const auto& s : found) {
    std::vector<Vec> gens;
    for (std::size_t i : s) gens.push_back(rays[i]);
    Vec h(static_cast<std::size_t>(c.ambient_rank()), 0);
    for (std::size_t k = 0; k < facets.size(); ++k)
      if (std::includes(facet_sets[k].begin(), facet_sets[k].end(), s.begin(), s.end())) h = add(h, facets[k]);
    lat.faces.push_back(Face{RationalCone(c.ambient_rank(), gens), std::move(h), s});
  }
  std::sort(lat.faces.begin(), lat.faces.end(), [](const Face& a, const Face& b) {
    if (a.cone.dim() != b.cone.dim()) return a.cone.dim() < b.cone.dim();
    return a.ray_indices < b.ray_indices;
  });
  for (std::size_t i = 0; i < lat.faces.size(); ++i)
    for (std::size_t j = 0; j < lat.faces.size(); ++j) {
      const auto& a = lat.faces[i].ray_indices;
      const auto& b = lat.faces[j].ray_indices;
      if (i != j && a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end()))
        lat.inclusions.emplace_back(i, j);
    }
  return lat;
}

bool is_face_of(const RationalCone& candidate, const RationalCone& c) {
  if (candidate.ambient_rank() != c.ambient_rank() || !c.contains(candidate)) return false;
  if (!c.is_strongly_convex() || !candidate.is_strongly_convex()) return false;
  // A subcone is a face iff it is cut out by the facets vanishing on it.
  std::vector<Vec> ineq = c.facets();
  std::vector<Vec> eq = c.equations();
  for (const Vec& f : c.facets())
    if (std::all_of(candidate.rays().begin(), candidate.rays().end(), [&](const Vec& r) { return dot(f, r) == 0; }))
      eq.push_back(f);
  return RationalCone::from_inequalities(c.ambient_rank(), ineq, eq) == candidate;
}

namespace {

void pull(const FaceLattice& lat, std::size_t face, std::vector<std::vector<std::size_t>>& out) {
  const Face& g = lat.faces[face];
  if (g.ray_indices.size() == static_cast<std::size_t>(g.cone.dim())) {
    out.push_back(g.ray_indices);
    return;
  }
  const std::size_t v = g.ray_indices.front();
  for (std::size_t k = 0; k < lat.faces.size(); ++k) {
    const Face& h = lat.faces[k];
    if (h.cone.dim() != g.cone.dim() - 1) continue;
    if (!std::includes(g.ray_indices.begin(), g.ray_indices.end(), h.ray_indices.begin(), h.ray_indices.end()))
      continue;
    if (std::binary_search(h.ray_indices.begin(), h.ray_indices.end(), v)) continue;
    std::vector<std::vector<std::size_t>> sub;
    pull(lat, k, sub);
    for (auto& s : sub) {
      s.push_back(v);
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> triangulate(const RationalCone& c) {
  const FaceLattice lat = faces(c);
  std::vector<std::vector<std::size_t>> out;
  pull(lat, lat.faces.size() - 1, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> coordinates_in(const std::vector<Vec>& basis, const std::vector<Vec>& vectors) {
  std::vector<Vec> out;
  for (const Vec& v : vectors) {
    auto c = lattice_coordinates(basis, v);
    if (!c) throw InvalidInput("vector " + to_string(v) + " is not in the given lattice");
    out.push_back(std::move(*c));
  }
  return out;
}

Int multiplicity(const RationalCone& c) {
  if (!c.is_simplicial()) throw NotSimplicial("multiplicity needs a simplicial cone");
  if (c.dim() == 0) return 1;
  const auto coords = coordinates_in(c.span_lattice_basis(), c.rays());
  return checked_abs(determinant(IntMatrix::from_columns(coords)));
}

std::vector<Vec> parallelepiped_points(const RationalCone& c) {
  if (!c.is_simplicial()) throw NotSimplicial("parallelepiped needs a simplicial cone");
  const auto k = static_cast<std::size_t>(c.dim());
  if (k == 0) return {};
  const auto basis = c.span_lattice_basis();
  const auto coords = coordinates_in(basis, c.rays());
  const IntMatrix v = IntMatrix::from_columns(coords);
  const Int det = determinant(v);
  const Int d = checked_abs(det);
  if (d == 1) return {};
  // adj = d * V^{-1} is integral; lambda_i = (adj x)_i / d.
  const RatMatrix inv = *inverse(to_rational(v));
  IntMatrix adj(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Rational e = inv(i, j) * Rational(d);
      adj(i, j) = e.num();
    }
  auto reduce = [&](Vec x) {
    const Vec lam = katofan::apply(adj, x);
    for (std::size_t i = 0; i < k; ++i) {
      const Int f = floor_div(lam[i], d);
      if (f != 0) x = combine(1, x, -f, coords[i]);
    }
    return x;
  };
  std::set<Vec> seen{Vec(k, 0)};
  std::deque<Vec> queue{Vec(k, 0)};
  while (!queue.empty()) {
    const Vec x = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < k; ++j) {
      Vec y = x;
      y[j] = checked_add(y[j], 1);
      y = reduce(std::move(y));
      if (seen.insert(y).second) queue.push_back(std::move(y));
    }
  }
  std::vector<Vec> out;
  for (const Vec& x : seen) {
    if (is_zero(x)) continue;
    Vec p(static_cast<std::size_t>(c.ambient_rank()), 0);
    for (std::size_t i = 0; i < k; ++i) p = combine(1, p, x[i], basis[i]);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace katofan
