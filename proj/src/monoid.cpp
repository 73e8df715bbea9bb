#include "katofan/monoid.hpp"

#include <algorithm>
#include <functional>

#include "katofan/kernels.hpp"
#include "katofan/lattice.hpp"

namespace katofan {

namespace {

void sort_unique(std::vector<Vec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Vec> identity_basis(int k) {
  std::vector<Vec> b;
  for (int i = 0; i < k; ++i) b.push_back(unit_vector(k, i));
  return b;
}

Vec from_coordinates(const std::vector<Vec>& basis, const Vec& c, int ambient) {
  Vec out(static_cast<std::size_t>(ambient), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) out = combine(1, out, c[i], basis[i]);
  return out;
}

// Hilbert basis of cone(gens) ∩ Z^k for a full-dimensional cone.
std::vector<Vec> hilbert_basis_full(int k, const std::vector<Vec>& gens) {
  if (k == 0) return {};
  const RationalCone c(k, gens);
  if (!c.is_strongly_convex()) {
    const auto& lin = c.lineality();
    const auto q = quotient_by_span(lin, k);
    std::vector<Vec> projected;
    for (const Vec& g : gens) {
      Vec p = katofan::apply(q.projection, g);
      if (!is_zero(p)) projected.push_back(std::move(p));
    }
    std::vector<Vec> out;
    for (const Vec& h : hilbert_basis_full(k - static_cast<int>(lin.size()), projected))
      out.push_back(katofan::apply(q.section, h));
    for (const Vec& l : lin) {
      out.push_back(l);
      out.push_back(negate(l));
    }
    sort_unique(out);
    return out;
  }
  std::vector<Vec> cand = c.rays();
  for (const auto& simplex : triangulate(c)) {
    std::vector<Vec> rays;
    for (std::size_t i : simplex) rays.push_back(c.rays()[i]);
    const auto pts = parallelepiped_points(RationalCone(k, rays));
    cand.insert(cand.end(), pts.begin(), pts.end());
  }
  sort_unique(cand);
  const auto mask = kernels::irreducible_mask(cand, c);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (mask[i]) out.push_back(cand[i]);
  return out;
}

}  // namespace

AffineMonoid::AffineMonoid(int ambient_rank, std::vector<Vec> generators, bool saturated)
    : ambient_rank_(ambient_rank), saturated_(saturated) {
  if (ambient_rank < 0) throw InvalidInput("negative ambient rank");
  for (const Vec& g : generators)
    if (g.size() != static_cast<std::size_t>(ambient_rank))
      throw DimensionMismatch("generator " + to_string(g) + " does not live in Z^" + std::to_string(ambient_rank));
  std::erase_if(generators, [](const Vec& g) { return is_zero(g); });
  sort_unique(generators);
  generators_ = std::move(generators);
}

std::vector<Vec> hilbert_basis(const std::vector<Vec>& generators, const std::vector<Vec>& lattice, int ambient) {
  const int r = static_cast<int>(lattice.size());
  const auto coords = coordinates_in(lattice, generators);
  if (coords.empty()) return {};
  const auto span = lattice_basis(saturated_span_basis(coords, r), r);
  const auto local = coordinates_in(span, coords);
  std::vector<Vec> out;
  for (const Vec& h : hilbert_basis_full(static_cast<int>(span.size()), local))
    out.push_back(from_coordinates(lattice, from_coordinates(span, h, r), ambient));
  sort_unique(out);
  return out;
}

Lattice groupify(const AffineMonoid& m) {
  return Lattice{m.ambient_rank(), lattice_basis(m.generators(), m.ambient_rank())};
}

RationalCone real_cone(const AffineMonoid& m) { return RationalCone(m.ambient_rank(), m.generators()); }

AffineMonoid saturate(const AffineMonoid& m) {
  if (m.hilbert_basis_) return m;
  const Lattice g = groupify(m);
  auto hb = hilbert_basis(m.generators(), g.basis, m.ambient_rank());
  AffineMonoid out(m.ambient_rank(), hb, true);
  out.hilbert_basis_ = std::move(hb);
  return out;
}

bool is_saturated(const AffineMonoid& m) {
  if (m.saturated_flag()) return true;
  const AffineMonoid s = saturate(m);
  return std::all_of(s.generators().begin(), s.generators().end(), [&](const Vec& h) { return contains(m, h); });
}

bool contains(const AffineMonoid& m, const Vec& x) {
  const int d = m.ambient_rank();
  if (x.size() != static_cast<std::size_t>(d)) throw DimensionMismatch("element " + to_string(x) + " has wrong rank");
  if (is_zero(x)) return true;
  const Lattice g = groupify(m);
  if (!lattice_coordinates(g.basis, x)) return false;
  const RationalCone c = real_cone(m);
  if (!c.contains(x)) return false;
  if (m.saturated_flag()) return true;

  // Generators on the lineality space generate the unit group; the others
  // have positive weight under phi, which bounds their multiplicities.
  Vec phi(static_cast<std::size_t>(d), 0);
  for (const Vec& f : c.facets()) phi = add(phi, f);
  std::vector<Vec> units, rest;
  std::vector<Int> weight;
  for (const Vec& gen : m.generators()) {
    if (dot(phi, gen) == 0) {
      units.push_back(gen);
    } else {
      rest.push_back(gen);
      weight.push_back(dot(phi, gen));
    }
  }
  const auto unit_lattice = units.empty() ? std::vector<Vec>{} : lattice_basis(units, d);
  std::function<bool(std::size_t, Int, const Vec&)> search = [&](std::size_t j, Int budget, const Vec& y) {
    if (j == rest.size()) return budget == 0 && lattice_coordinates(unit_lattice, y).has_value();
    Vec z = y;
    for (Int b = budget; b >= 0; b -= weight[j]) {
      if (search(j + 1, b, z)) return true;
      z = sub(z, rest[j]);
    }
    return false;
  };
  return search(0, dot(phi, x), x);
}

bool same_monoid(const AffineMonoid& a, const AffineMonoid& b) {
  if (a.ambient_rank() != b.ambient_rank()) return false;
  const auto in = [](const AffineMonoid& p, const AffineMonoid& q) {
    return std::all_of(p.generators().begin(), p.generators().end(), [&](const Vec& g) { return contains(q, g); });
  };
  return in(a, b) && in(b, a);
}

SharpQuotient units_and_sharpen(const AffineMonoid& m) {
  SharpQuotient q;
  q.group = groupify(m);
  const int r = q.group.rank();
  const auto coords = coordinates_in(q.group.basis, m.generators());
  const RationalCone c(r, coords);
  std::vector<Vec> unit_gens;
  for (const Vec& x : coords)
    if (std::all_of(c.facets().begin(), c.facets().end(), [&](const Vec& f) { return dot(f, x) == 0; }))
      unit_gens.push_back(x);
  const auto units = unit_gens.empty() ? std::vector<Vec>{} : lattice_basis(unit_gens, r);
  if (!units.empty() && units != lattice_basis(saturated_span_basis(units, r), r))
    throw HypothesisViolated("unit group is not saturated in the group; saturate the monoid first");
  const auto quot = quotient_by_span(units, r);
  std::vector<Vec> sharp_gens;
  for (const Vec& x : coords) sharp_gens.push_back(katofan::apply(quot.projection, x));
  q.sharp = AffineMonoid(r - static_cast<int>(units.size()), sharp_gens, m.saturated_flag());
  for (const Vec& u : units) q.unit_basis.push_back(from_coordinates(q.group.basis, u, m.ambient_rank()));
  q.projection = quot.projection;
  return q;
}

Vec sharp_image(const SharpQuotient& q, const Vec& x) {
  const auto c = lattice_coordinates(q.group.basis, x);
  if (!c) throw ElementNotInMonoid("element " + to_string(x) + " is not in the group of the monoid");
  return katofan::apply(q.projection, *c);
}

bool is_sharp(const AffineMonoid& m) { return real_cone(m).is_strongly_convex(); }

AffineMonoid localize(const AffineMonoid& m, const Vec& f) {
  if (!contains(m, f)) throw ElementNotInMonoid("cannot localize at " + to_string(f) + ": not in the monoid");
  if (is_zero(f)) return m;
  auto gens = m.generators();
  gens.push_back(negate(f));
  return AffineMonoid(m.ambient_rank(), gens, m.saturated_flag());
}

MonoidSpectrum spec(const AffineMonoid& m) {
  const AffineMonoid sat = saturate(m);
  const SharpQuotient sq = units_and_sharpen(sat);
  const int k = sq.sharp.ambient_rank();
  MonoidSpectrum s;
  s.hilbert_basis = hilbert_basis(sq.sharp.generators(), identity_basis(k), k);
  s.monoid = saturate(AffineMonoid(k, s.hilbert_basis));
  const RationalCone c(k, s.hilbert_basis);
  const FaceLattice lat = faces(c);
  struct Entry {
    int height;
    PrimeIdeal prime;
  };
  std::vector<Entry> entries;
  for (const Face& f : lat.faces) {
    PrimeIdeal p;
    for (std::size_t i = 0; i < s.hilbert_basis.size(); ++i)
      if (f.cone.contains(s.hilbert_basis[i])) p.complement_face.push_back(i);
    entries.push_back(Entry{c.dim() - f.cone.dim(), std::move(p)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.prime.complement_face < b.prime.complement_face;
  });
  for (auto& e : entries) {
    s.heights.push_back(e.height);
    s.primes.push_back(std::move(e.prime));
  }
  for (std::size_t a = 0; a < s.primes.size(); ++a)
    for (std::size_t b = 0; b < s.primes.size(); ++b) {
      const auto& fa = s.primes[a].complement_face;
      const auto& fb = s.primes[b].complement_face;
      if (a != b && fb.size() < fa.size() && std::includes(fa.begin(), fa.end(), fb.begin(), fb.end()))
        s.generizations.emplace_back(a, b);
    }
  return s;
}

bool ideal_contains(const MonoidIdeal& ideal, const Vec& x) {
  return std::any_of(ideal.generators.begin(), ideal.generators.end(),
                     [&](const Vec& g) { return contains(ideal.parent, sub(x, g)); });
}

bool is_prime(const MonoidIdeal& ideal) {
  const AffineMonoid& p = ideal.parent;
  for (const Vec& g : ideal.generators)
    if (!contains(p, g)) throw NotAnIdeal("generator " + to_string(g) + " is not in the parent monoid");
  if (!is_sharp(p)) throw NotSharp("is_prime needs a sharp parent");
  const auto hb = saturate(p).generators();
  std::vector<Vec> kept, dropped;
  for (const Vec& h : hb) (ideal_contains(ideal, h) ? dropped : kept).push_back(h);
  const RationalCone c = real_cone(p);
  const RationalCone face(p.ambient_rank(), kept);
  if (!is_face_of(face, c)) return false;
  for (const Vec& h : dropped)
    if (face.contains(h)) return false;
  for (const Vec& g : ideal.generators)
    if (face.contains(g)) return false;
  return true;
}

Pushout fs_pushout(const IntMatrix& f, const std::vector<Vec>& left_generators, const IntMatrix& g,
                   const std::vector<Vec>& right_generators) {
  if (f.cols() != g.cols()) throw DimensionMismatch("pushout maps have different sources");
  const std::size_t b = f.rows(), c = g.rows();
  const int total = static_cast<int>(b + c);
  std::vector<Vec> relations;
  for (std::size_t i = 0; i < f.cols(); ++i) {
    Vec r = f.column(i);
    const Vec gc = negate(g.column(i));
    r.insert(r.end(), gc.begin(), gc.end());
    if (!is_zero(r)) relations.push_back(std::move(r));
  }
  // Saturating the relation span kills torsion in the amalgamated group.
  const auto rel = quotient_by_span(relations, total);
  const IntMatrix left = rel.projection.column_block(0, b);
  const IntMatrix right = rel.projection.column_block(b, c);
  const int k = static_cast<int>(rel.projection.rows());
  std::vector<Vec> gens;
  for (const Vec& x : left_generators) gens.push_back(katofan::apply(left, x));
  for (const Vec& x : right_generators) gens.push_back(katofan::apply(right, x));
  std::erase_if(gens, [](const Vec& v) { return is_zero(v); });

  std::vector<Vec> sat = gens.empty() ? std::vector<Vec>{} : hilbert_basis(gens, identity_basis(k), k);
  // Sharpen: units of a saturated monoid with full group are the lineality lattice.
  const RationalCone cone(k, sat);
  const auto units = quotient_by_span(cone.lineality(), k);
  Pushout out;
  out.rank = static_cast<int>(units.projection.rows());
  out.from_left = units.projection * left;
  out.from_right = units.projection * right;
  for (const Vec& h : sat) {
    Vec x = katofan::apply(units.projection, h);
    if (!is_zero(x)) out.generators.push_back(std::move(x));
  }
  sort_unique(out.generators);
  return out;
}

}  // namespace katofan
