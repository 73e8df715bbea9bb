#include "katofan/fan.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "katofan/lattice.hpp"

namespace katofan {

namespace {

std::vector<Vec> identity_rows(int k) {
  std::vector<Vec> b;
  for (int i = 0; i < k; ++i) b.push_back(unit_vector(k, i));
  return b;
}

std::vector<Vec> images(const MonoidMap& m, const std::vector<Vec>& xs) {
  std::vector<Vec> out;
  for (const Vec& x : xs) out.push_back(katofan::apply(m, x));
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace

// ---- stalks ----------------------------------------------------------------

Stalk Stalk::make(int rank, const std::vector<Vec>& generators, std::vector<std::string> labels) {
  if (rank < 0) throw InvalidInput("negative stalk rank");
  if (!labels.empty() && labels.size() != generators.size())
    throw InvalidInput("stalk has " + std::to_string(labels.size()) + " labels for " +
                       std::to_string(generators.size()) + " generators");
  const AffineMonoid m(rank, generators);
  if (lattice_basis(m.generators(), rank) != identity_rows(rank))
    throw InvalidInput("stalk generators must generate the group Z^" + std::to_string(rank));
  if (!is_sharp(m)) throw NotSharp("stalk monoid has nontrivial units");
  const AffineMonoid sat = saturate(m);
  for (const Vec& h : sat.generators())
    if (!katofan::contains(m, h)) throw InvalidInput("stalk monoid is not saturated: " + to_string(h) + " is missing");
  Stalk s;
  s.rank = rank;
  s.generators = sat.generators();
  if (!labels.empty()) {
    s.labels.assign(s.generators.size(), "");
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const auto it = std::find(s.generators.begin(), s.generators.end(), generators[i]);
      if (it != s.generators.end()) {
        auto& slot = s.labels[static_cast<std::size_t>(it - s.generators.begin())];
        if (slot.empty()) slot = labels[i];
      }
    }
    if (std::all_of(s.labels.begin(), s.labels.end(), [](const std::string& l) { return l.empty(); }))
      s.labels.clear();
  }
  return s;
}

bool Stalk::contains(const Vec& x) const { return katofan::contains(monoid(), x); }

std::string Stalk::label(std::size_t i) const {
  if (i < labels.size() && !labels[i].empty()) return labels[i];
  return to_string(generators[i]);
}

std::string describe_prime(const Stalk& s, const std::vector<std::size_t>& complement_face) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < s.generators.size(); ++i)
    if (!std::binary_search(complement_face.begin(), complement_face.end(), i)) parts.push_back(s.label(i));
  return "prime(" + join(parts, ",") + ")";
}

namespace {

// Faces of a stalk as Hilbert-basis index sets, in prime order: by height
// (codimension), then lexicographically.
std::vector<std::vector<std::size_t>> stalk_faces(const Stalk& s) {
  const RationalCone c(s.rank, s.generators);
  const FaceLattice lat = faces(c);
  std::vector<std::pair<int, std::vector<std::size_t>>> tmp;
  for (const Face& f : lat.faces) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.generators.size(); ++i)
      if (f.cone.contains(s.generators[i])) idx.push_back(i);
    tmp.emplace_back(c.dim() - f.cone.dim(), std::move(idx));
  }
  std::sort(tmp.begin(), tmp.end());
  std::vector<std::vector<std::size_t>> out;
  for (auto& t : tmp) out.push_back(std::move(t.second));
  return out;
}

std::vector<std::size_t> kernel_face(const Stalk& p, const MonoidMap& phi) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    if (is_zero(katofan::apply(phi, p.generators[i]))) out.push_back(i);
  return out;
}

// Indices of P's generators mapped by phi into the face of Q spanned by face_q.
std::vector<std::size_t> pullback_face(const Stalk& p, const Stalk& q, const MonoidMap& phi,
                                       const std::vector<std::size_t>& face_q) {
  std::vector<Vec> gens;
  for (std::size_t i : face_q) gens.push_back(q.generators[i]);
  const RationalCone f(q.rank, gens);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    if (f.contains(katofan::apply(phi, p.generators[i]))) out.push_back(i);
  return out;
}

}  // namespace

bool is_localization_map(const Stalk& p, const Stalk& q, const MonoidMap& phi) {
  if (phi.rows() != static_cast<std::size_t>(q.rank) || phi.cols() != static_cast<std::size_t>(p.rank)) return false;
  for (const Vec& g : p.generators)
    if (!q.contains(katofan::apply(phi, g))) return false;
  const auto face = kernel_face(p, phi);
  std::vector<Vec> face_gens;
  for (std::size_t i : face) face_gens.push_back(p.generators[i]);
  const auto ker = integer_kernel(phi);
  if (ker.size() != (face_gens.empty() ? 0 : rank_of(face_gens, p.rank))) return false;
  if (q.rank > 0) {
    if (rank(phi) != static_cast<std::size_t>(q.rank)) return false;
    const auto inv = smith_invariants(phi);
    if (std::any_of(inv.begin(), inv.end(), [](Int d) { return d != 1; })) return false;
  }
  const auto img = images(phi, p.generators);
  const RationalCone image_cone(q.rank, img);
  return std::all_of(q.generators.begin(), q.generators.end(), [&](const Vec& g) { return image_cone.contains(g); });
}

LocalStalk localize_at_face(const Stalk& p, const std::vector<std::size_t>& face) {
  LocalStalk out;
  if (face.empty()) {
    out.stalk = p;
    out.projection = IntMatrix::identity(static_cast<std::size_t>(p.rank));
    out.section = out.projection;
    return out;
  }
  std::vector<Vec> face_gens;
  for (std::size_t i : face) face_gens.push_back(p.generators[i]);
  const auto q = quotient_by_span(face_gens, p.rank);
  const int r = static_cast<int>(q.projection.rows());
  std::vector<Vec> gens;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    Vec x = katofan::apply(q.projection, p.generators[i]);
    if (is_zero(x)) continue;
    gens.push_back(std::move(x));
    labels.push_back(i < p.labels.size() ? p.labels[i] : "");
  }
  const bool labelled = std::any_of(labels.begin(), labels.end(), [](const std::string& l) { return !l.empty(); });
  out.stalk = Stalk::make(r, gens, labelled ? labels : std::vector<std::string>{});
  out.projection = q.projection;
  out.section = q.section;
  return out;
}

// ---- monoidal spaces -------------------------------------------------------

MonoidalSpace::MonoidalSpace(std::vector<Point> points, std::vector<Edge> edges)
    : points_(std::move(points)), edges_(std::move(edges)) {
  const std::size_t n = points_.size();
  std::set<std::string> names;
  for (const Point& p : points_) {
    if (p.name.empty()) throw InvalidInput("point with empty name");
    if (!names.insert(p.name).second) throw InvalidInput("duplicate point name '" + p.name + "'");
  }
  for (const Edge& e : edges_) {
    if (e.special >= n || e.generic >= n) throw InvalidInput("generization refers to a missing point");
    const auto& s = points_[e.special];
    const auto& g = points_[e.generic];
    if (e.special == e.generic) throw InvalidInput("generization from '" + s.name + "' to itself");
    if (e.map.rows() != static_cast<std::size_t>(g.stalk.rank) ||
        e.map.cols() != static_cast<std::size_t>(s.stalk.rank))
      throw InvalidInput("generization map " + s.name + " -> " + g.name + " has the wrong shape");
    if (!is_localization_map(s.stalk, g.stalk, e.map))
      throw InvalidInput("generization map " + s.name + " -> " + g.name + " is not a localization followed by sharpening");
  }
  closure_.assign(n, std::vector<std::optional<MonoidMap>>(n));
  for (std::size_t s = 0; s < n; ++s) {
    closure_[s][s] = IntMatrix::identity(static_cast<std::size_t>(points_[s].stalk.rank));
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (const Edge& e : edges_) {
        if (e.special != cur) continue;
        if (e.generic == s) throw InvalidInput("generization relation has a cycle through '" + points_[s].name + "'");
        const MonoidMap m = e.map * *closure_[s][cur];
        auto& slot = closure_[s][e.generic];
        if (slot) {
          if (*slot != m)
            throw InvalidInput("generization maps " + points_[s].name + " -> " + points_[e.generic].name +
                               " do not compose consistently");
        } else {
          slot = m;
          queue.push_back(e.generic);
        }
      }
    }
  }
}

std::optional<std::size_t> MonoidalSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].name == name) return i;
  return std::nullopt;
}

bool MonoidalSpace::generizes(std::size_t generic, std::size_t special) const {
  return closure_[special][generic].has_value();
}

const MonoidMap& MonoidalSpace::map(std::size_t special, std::size_t generic) const {
  const auto& m = closure_[special][generic];
  if (!m) throw InvalidInput("'" + points_[generic].name + "' does not generize '" + points_[special].name + "'");
  return *m;
}

std::vector<std::size_t> MonoidalSpace::neighborhood(std::size_t t) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < points_.size(); ++g)
    if (generizes(g, t)) out.push_back(g);
  return out;
}

FanCheck is_fan(const MonoidalSpace& x) {
  FanCheck check;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const auto nbhd = x.neighborhood(t);
    const auto faces_t = stalk_faces(x.stalk(t));
    auto fail = [&](const std::string& why) {
      check.ok = false;
      check.failing_point = t;
      check.reason = x.point(t).name + ": " + why;
      check.charts.clear();
      return check;
    };
    if (nbhd.size() != faces_t.size())
      return fail("neighborhood has " + std::to_string(nbhd.size()) + " points but Spec of the stalk has " +
                  std::to_string(faces_t.size()));
    Chart chart{t, nbhd, {}};
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t g : nbhd) {
      auto f = kernel_face(x.stalk(t), x.map(t, g));
      if (std::find(faces_t.begin(), faces_t.end(), f) == faces_t.end())
        return fail("map to '" + x.point(g).name + "' does not kill a face");
      if (!seen.insert(f).second) return fail("two generizations share the kernel face of '" + x.point(g).name + "'");
      chart.faces.push_back(std::move(f));
    }
    for (std::size_t a = 0; a < nbhd.size(); ++a)
      for (std::size_t b = 0; b < nbhd.size(); ++b) {
        const auto& fa = chart.faces[a];
        const auto& fb = chart.faces[b];
        const bool by_faces = std::includes(fa.begin(), fa.end(), fb.begin(), fb.end());
        if (by_faces != x.generizes(nbhd[a], nbhd[b]))
          return fail("generization order of '" + x.point(nbhd[a]).name + "' and '" + x.point(nbhd[b]).name +
                      "' differs from the face order");
      }
    check.charts.push_back(std::move(chart));
  }
  check.ok = true;
  return check;
}

KatoFan spec_to_space(const Stalk& s) {
  const auto fs = stalk_faces(s);
  std::vector<LocalStalk> local;
  std::vector<MonoidalSpace::Point> points;
  for (const auto& f : fs) {
    local.push_back(localize_at_face(s, f));
    points.push_back(MonoidalSpace::Point{describe_prime(s, f), local.back().stalk, f.empty()});
  }
  std::vector<MonoidalSpace::Edge> edges;
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = 0; b < fs.size(); ++b) {
      // a generizes b when face(b) is a facet of face(a).
      if (a == b || fs[b].size() >= fs[a].size()) continue;
      if (!std::includes(fs[a].begin(), fs[a].end(), fs[b].begin(), fs[b].end())) continue;
      if (local[a].stalk.rank + 1 != local[b].stalk.rank) continue;
      edges.push_back(MonoidalSpace::Edge{b, a, local[a].projection * local[b].section});
    }
  KatoFan k{MonoidalSpace(std::move(points), std::move(edges)), {}};
  k.charts = is_fan(k.space).charts;
  return k;
}

KatoFan spec_to_space(const AffineMonoid& m) {
  if (!is_sharp(m)) throw NotSharp("Spec needs a sharp monoid");
  const AffineMonoid sat = saturate(m);
  const Lattice g = groupify(sat);
  return spec_to_space(Stalk::make(g.rank(), coordinates_in(g.basis, sat.generators())));
}

// ---- rational fans ---------------------------------------------------------

RationalFan RationalFan::from_cones(int ambient_rank, std::vector<RationalCone> cones) {
  for (const auto& c : cones)
    if (c.ambient_rank() != ambient_rank) throw DimensionMismatch("cone lives in the wrong lattice");
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  return RationalFan{ambient_rank, std::move(cones)};
}

RationalFan RationalFan::generated_by(int ambient_rank, const std::vector<RationalCone>& maximal) {
  std::vector<RationalCone> all;
  for (const auto& c : maximal)
    for (const Face& f : faces(c).faces) all.push_back(f.cone);
  if (all.empty()) all.push_back(RationalCone(ambient_rank, {}));
  return from_cones(ambient_rank, std::move(all));
}

std::vector<Vec> RationalFan::rays() const {
  std::set<Vec> r;
  for (const auto& c : cones) r.insert(c.rays().begin(), c.rays().end());
  return {r.begin(), r.end()};
}

std::vector<std::size_t> RationalFan::maximal_cones() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cones.size() && maximal; ++j)
      if (j != i && cones[j].dim() > cones[i].dim() && cones[j].contains(cones[i])) maximal = false;
    if (maximal) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> RationalFan::index_of(const RationalCone& c) const {
  for (std::size_t i = 0; i < cones.size(); ++i)
    if (cones[i] == c) return i;
  return std::nullopt;
}

bool RationalFan::in_support(const Vec& v) const {
  return std::any_of(cones.begin(), cones.end(), [&](const RationalCone& c) { return c.contains(v); });
}

std::string describe_cone(const RationalCone& c) {
  std::vector<std::string> parts;
  for (const Vec& r : c.rays()) parts.push_back(to_string(r));
  return "cone(" + join(parts, ",") + ")";
}

FanReport validate_rational_fan(const RationalFan& f) {
  FanReport r;
  auto fail = [&](std::string why, std::size_t i, std::size_t j) {
    r.valid = false;
    r.violation = std::move(why);
    r.pair = std::make_pair(i, j);
    return r;
  };
  if (f.cones.empty()) {
    r.valid = false;
    r.violation = "a fan must contain at least one cone";
    return r;
  }
  for (std::size_t i = 0; i < f.cones.size(); ++i) {
    const auto& c = f.cones[i];
    if (c.ambient_rank() != f.ambient_rank) return fail(describe_cone(c) + " lives in the wrong lattice", i, i);
    if (!c.is_strongly_convex()) return fail(describe_cone(c) + " is not strongly convex", i, i);
  }
  for (std::size_t i = 0; i < f.cones.size(); ++i)
    for (const Face& face : faces(f.cones[i]).faces)
      if (!f.index_of(face.cone)) return fail("face " + describe_cone(face.cone) + " of " + describe_cone(f.cones[i]) + " is missing", i, i);
  for (std::size_t i = 0; i < f.cones.size(); ++i)
    for (std::size_t j = i + 1; j < f.cones.size(); ++j) {
      const RationalCone meet = intersect(f.cones[i], f.cones[j]);
      if (!is_face_of(meet, f.cones[i]) || !is_face_of(meet, f.cones[j]))
        return fail("intersection " + describe_cone(meet) + " of " + describe_cone(f.cones[i]) + " and " +
                        describe_cone(f.cones[j]) + " is not a face of both",
                    i, j);
    }
  return r;
}

KatoFan rational_to_kato(const RationalFan& f) {
  const FanReport report = validate_rational_fan(f);
  if (!report.valid) throw InvalidFan(report.violation);
  std::vector<SharpDual> duals;
  std::vector<MonoidalSpace::Point> points;
  const auto maximal = f.maximal_cones();
  for (std::size_t i = 0; i < f.cones.size(); ++i) {
    duals.push_back(sharp_dual(f.cones[i]));
    const bool designated = std::find(maximal.begin(), maximal.end(), i) != maximal.end();
    points.push_back(MonoidalSpace::Point{describe_cone(f.cones[i]),
                                          Stalk::make(f.cones[i].dim(), duals.back().hilbert_basis), designated});
  }
  std::vector<MonoidalSpace::Edge> edges;
  for (std::size_t s = 0; s < f.cones.size(); ++s)
    for (std::size_t t = 0; t < f.cones.size(); ++t) {
      if (f.cones[t].dim() + 1 != f.cones[s].dim() || !f.cones[s].contains(f.cones[t])) continue;
      const auto rows = restriction_rows(duals[s], duals[t]);
      edges.push_back(MonoidalSpace::Edge{s, t, IntMatrix::from_rows(rows, static_cast<std::size_t>(f.cones[s].dim()))});
    }
  KatoFan k{MonoidalSpace(std::move(points), std::move(edges)), {}};
  const FanCheck check = is_fan(k.space);
  if (!check.ok) throw InvalidFan("rational fan does not give a Kato fan: " + check.reason);
  k.charts = check.charts;
  return k;
}

// ---- morphisms -------------------------------------------------------------

void validate_morphism(const FanMorphism& f) {
  if (!f.source || !f.target) throw InvalidInput("morphism without source or target");
  const auto& x = *f.source;
  const auto& y = *f.target;
  if (f.point_map.size() != x.size() || f.stalk_maps.size() != x.size())
    throw InvalidInput("morphism data does not cover every source point");
  for (std::size_t p = 0; p < x.size(); ++p) {
    const std::size_t q = f.point_map[p];
    if (q >= y.size()) throw InvalidInput("point map leaves the target");
    const auto& m = f.stalk_maps[p];
    if (m.rows() != static_cast<std::size_t>(x.stalk(p).rank) || m.cols() != static_cast<std::size_t>(y.stalk(q).rank))
      throw InvalidInput("stalk map at '" + x.point(p).name + "' has the wrong shape");
    for (const Vec& g : y.stalk(q).generators) {
      const Vec img = katofan::apply(m, g);
      if (!x.stalk(p).contains(img)) throw InvalidInput("stalk map at '" + x.point(p).name + "' is not a monoid map");
      if (is_zero(img)) throw InvalidInput("stalk map at '" + x.point(p).name + "' is not local");
    }
  }
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b) {
      if (a == b || !x.generizes(a, b)) continue;
      const std::size_t fa = f.point_map[a], fb = f.point_map[b];
      if (!y.generizes(fa, fb))
        throw InvalidInput("point map is not continuous at '" + x.point(a).name + "' -> '" + x.point(b).name + "'");
      if (f.stalk_maps[a] * y.map(fb, fa) != x.map(b, a) * f.stalk_maps[b])
        throw InvalidInput("stalk maps do not commute with generization '" + x.point(b).name + "' -> '" +
                           x.point(a).name + "'");
    }
}

bool is_stalk_isomorphism(const Stalk& from, const Stalk& to, const MonoidMap& m) {
  if (from.rank != to.rank) return false;
  if (m.rows() != static_cast<std::size_t>(to.rank) || m.cols() != static_cast<std::size_t>(from.rank)) return false;
  if (from.rank > 0 && checked_abs(determinant(m)) != 1) return false;
  auto img = images(m, from.generators);
  std::sort(img.begin(), img.end());
  return img == to.generators;
}

bool is_strict(const FanMorphism& f) {
  for (std::size_t p = 0; p < f.source->size(); ++p)
    if (!is_stalk_isomorphism(f.target->stalk(f.point_map[p]), f.source->stalk(p), f.stalk_maps[p])) return false;
  return true;
}

FanMorphism identity_morphism(std::shared_ptr<const MonoidalSpace> x) {
  FanMorphism f;
  for (std::size_t p = 0; p < x->size(); ++p) {
    f.point_map.push_back(p);
    f.stalk_maps.push_back(IntMatrix::identity(static_cast<std::size_t>(x->stalk(p).rank)));
  }
  f.source = x;
  f.target = std::move(x);
  return f;
}

FanMorphism compose(const FanMorphism& g, const FanMorphism& f) {
  if (f.target != g.source && !(f.target && g.source && *f.target == *g.source))
    throw InvalidInput("morphisms are not composable");
  FanMorphism h;
  h.source = f.source;
  h.target = g.target;
  for (std::size_t p = 0; p < f.source->size(); ++p) {
    const std::size_t q = f.point_map[p];
    h.point_map.push_back(g.point_map[q]);
    h.stalk_maps.push_back(f.stalk_maps[p] * g.stalk_maps[q]);
  }
  return h;
}

FanMorphism spec_morphism(const Stalk& p, const Stalk& q, const MonoidMap& phi) {
  auto sp = std::make_shared<const MonoidalSpace>(spec_to_space(p).space);
  auto sq = std::make_shared<const MonoidalSpace>(spec_to_space(q).space);
  const auto fp = stalk_faces(p);
  const auto fq = stalk_faces(q);
  FanMorphism f;
  f.source = sq;
  f.target = sp;
  for (std::size_t y = 0; y < fq.size(); ++y) {
    const auto face = pullback_face(p, q, phi, fq[y]);
    const auto it = std::find(fp.begin(), fp.end(), face);
    if (it == fp.end()) throw InvalidInput("monoid map does not pull faces back to faces");
    const auto x = static_cast<std::size_t>(it - fp.begin());
    f.point_map.push_back(x);
    f.stalk_maps.push_back(localize_at_face(q, fq[y]).projection * phi * localize_at_face(p, face).section);
  }
  return f;
}

MonoidMap global_sections(const FanMorphism& f) {
  std::optional<std::size_t> closed_src, closed_tgt;
  for (std::size_t i = 0; i < f.source->size(); ++i)
    if (f.source->neighborhood(i).size() == f.source->size()) closed_src = i;
  for (std::size_t i = 0; i < f.target->size(); ++i)
    if (f.target->neighborhood(i).size() == f.target->size()) closed_tgt = i;
  if (!closed_src || !closed_tgt) throw InvalidInput("global sections need spaces with a closed point");
  const std::size_t z = f.point_map[*closed_src];
  return f.stalk_maps[*closed_src] * f.target->map(*closed_tgt, z);
}

// ---- associated fans -------------------------------------------------------

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Node {
  std::size_t chart;  // index into the chart list
  std::size_t prime;  // index into that chart's faces
};

struct Link {
  std::size_t a, b;
  MonoidMap transport;  // stalk(a) -> stalk(b)
};

}  // namespace

AssociatedFan build_associated_fan(const MonoidalSpace& x, AssocMode mode) {
  std::vector<std::size_t> charts;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.point(i).designated) charts.push_back(i);
  if (charts.empty()) throw InvalidInput("no designated chart points");

  std::vector<std::vector<std::vector<std::size_t>>> chart_faces;
  std::vector<std::vector<LocalStalk>> chart_local;
  std::vector<Node> nodes;
  std::vector<std::vector<std::size_t>> node_of;  // [chart][prime] -> node
  for (std::size_t c = 0; c < charts.size(); ++c) {
    const Stalk& s = x.stalk(charts[c]);
    chart_faces.push_back(stalk_faces(s));
    chart_local.emplace_back();
    node_of.emplace_back();
    for (std::size_t k = 0; k < chart_faces[c].size(); ++k) {
      chart_local[c].push_back(localize_at_face(s, chart_faces[c][k]));
      node_of[c].push_back(nodes.size());
      nodes.push_back(Node{c, k});
    }
  }
  auto face_index = [&](std::size_t c, const std::vector<std::size_t>& f) {
    const auto& fs = chart_faces[c];
    return static_cast<std::size_t>(std::find(fs.begin(), fs.end(), f) - fs.begin());
  };
  // Iso from the chart's local stalk at the pulled-back prime to the local
  // stalk of x at the prime with face g.
  auto chart_to_point = [&](std::size_t c, std::size_t k, std::size_t p, const LocalStalk& at_p) {
    return at_p.projection * x.map(charts[c], p) * chart_local[c][k].section;
  };

  DisjointSets sets(nodes.size());
  std::vector<Link> links;
  for (std::size_t p = 0; p < x.size(); ++p) {
    std::vector<std::size_t> over;
    for (std::size_t c = 0; c < charts.size(); ++c)
      if (x.generizes(p, charts[c])) over.push_back(c);
    if (over.size() < 2) continue;
    const Stalk& sp = x.stalk(p);
    for (const auto& g : stalk_faces(sp)) {
      const LocalStalk at_p = localize_at_face(sp, g);
      std::optional<std::size_t> first;
      MonoidMap first_iso;
      for (std::size_t c : over) {
        const std::size_t k = face_index(c, pullback_face(x.stalk(charts[c]), sp, x.map(charts[c], p), g));
        const std::size_t n = node_of[c][k];
        const MonoidMap iso = chart_to_point(c, k, p, at_p);
        if (!first) {
          first = n;
          first_iso = iso;
          continue;
        }
        sets.unite(*first, n);
        if (at_p.stalk.rank > 0) links.push_back(Link{*first, n, unimodular_inverse(iso) * first_iso});
        else links.push_back(Link{*first, n, IntMatrix(0, 0)});
      }
    }
  }
  std::vector<std::size_t> empty_primes;
  if (mode == AssocMode::over_standard_log_point)
    for (std::size_t c = 0; c < charts.size(); ++c) {
      const std::size_t n = node_of[c][0];  // face = everything, the empty prime
      if (!empty_primes.empty()) {
        sets.unite(empty_primes.front(), n);
        links.push_back(Link{empty_primes.front(), n, IntMatrix(0, 0)});
      }
      empty_primes.push_back(n);
    }

  AssociatedFan result;
  auto height = [&](const Node& n) {
    return x.stalk(charts[n.chart]).rank - chart_local[n.chart][n.prime].stalk.rank;
  };
  auto prime_text = [&](const Node& n) {
    return describe_prime(x.stalk(charts[n.chart]), chart_faces[n.chart][n.prime]);
  };
  for (std::size_t c = 0; c < charts.size() && !result.obstruction; ++c) {
    std::optional<std::pair<std::size_t, std::size_t>> clash;
    for (std::size_t a = 0; a < node_of[c].size(); ++a)
      for (std::size_t b = a + 1; b < node_of[c].size(); ++b) {
        const std::size_t na = node_of[c][a], nb = node_of[c][b];
        if (sets.find(na) != sets.find(nb)) continue;
        auto key = [&](std::size_t i, std::size_t j) {
          return std::make_tuple(height(nodes[i]), height(nodes[j]), prime_text(nodes[i]), prime_text(nodes[j]));
        };
        if (!clash || key(na, nb) < key(clash->first, clash->second)) clash = std::make_pair(na, nb);
      }
    if (clash) {
      Obstruction o;
      o.chart = x.point(charts[c]).name;
      o.first = prime_text(nodes[clash->first]);
      o.second = prime_text(nodes[clash->second]);
      o.message = o.first + " identified with " + o.second + " at " + o.chart;
      result.obstruction = o;
    }
  }
  if (result.obstruction) return result;

  // Classes become points; transports to the class representative by BFS.
  std::map<std::size_t, std::size_t> class_index;  // root -> point
  std::vector<std::size_t> rep;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const std::size_t root = sets.find(n);
    if (!class_index.count(root)) {
      class_index[root] = rep.size();
      rep.push_back(n);
    }
  }
  std::vector<std::optional<MonoidMap>> to_rep(nodes.size());  // stalk(node) -> stalk(rep)
  for (std::size_t r : rep) {
    to_rep[r] = IntMatrix::identity(static_cast<std::size_t>(chart_local[nodes[r].chart][nodes[r].prime].stalk.rank));
    std::deque<std::size_t> queue{r};
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (const Link& l : links) {
        std::size_t other;
        MonoidMap step;  // stalk(other) -> stalk(cur)
        if (l.a == cur) {
          other = l.b;
          step = l.transport.rows() ? unimodular_inverse(l.transport) : l.transport;
        } else if (l.b == cur) {
          other = l.a;
          step = l.transport;
        } else {
          continue;
        }
        const MonoidMap m = step.rows() ? *to_rep[cur] * step : IntMatrix(0, 0);
        if (to_rep[other]) {
          if (*to_rep[other] != m) {
            result.obstruction = Obstruction{x.point(charts[nodes[other].chart]).name, prime_text(nodes[other]),
                                             prime_text(nodes[r]),
                                             "stalk identifications around " + prime_text(nodes[other]) + " at " +
                                                 x.point(charts[nodes[other].chart]).name + " are inconsistent"};
            return result;
          }
        } else {
          to_rep[other] = m;
          queue.push_back(other);
        }
      }
    }
  }

  // Names: the point of X whose closed prime lands in the class, else chart.prime.
  const std::size_t npts = rep.size();
  std::vector<std::string> names(npts);
  std::vector<std::size_t> point_map(x.size());
  std::vector<MonoidMap> stalk_maps(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    std::optional<std::size_t> chart;
    for (std::size_t c = 0; c < charts.size() && !chart; ++c)
      if (x.generizes(p, charts[c])) chart = c;
    if (!chart) throw InvalidInput("point '" + x.point(p).name + "' lies in no chart");
    const MonoidMap& phi = x.map(charts[*chart], p);
    const std::size_t k = face_index(*chart, kernel_face(x.stalk(charts[*chart]), phi));
    const std::size_t n = node_of[*chart][k];
    const std::size_t cls = class_index[sets.find(n)];
    point_map[p] = cls;
    const MonoidMap local = phi * chart_local[*chart][k].section;  // stalk(node) -> stalk(p)
    stalk_maps[p] = local.rows() && to_rep[n]->rows() ? local * unimodular_inverse(*to_rep[n])
                                                      : IntMatrix(local.rows(), to_rep[n]->rows());
    if (names[cls].empty()) names[cls] = x.point(p).name;
  }
  for (std::size_t i = 0; i < npts; ++i) {
    const bool eta = mode == AssocMode::over_standard_log_point &&
                     std::find(empty_primes.begin(), empty_primes.end(), rep[i]) != empty_primes.end();
    if (eta) names[i] = "η";
    if (names[i].empty()) names[i] = x.point(charts[nodes[rep[i]].chart]).name + "." + prime_text(nodes[rep[i]]);
  }
  std::set<std::string> used;
  for (auto& nm : names)
    while (!used.insert(nm).second) nm += "'";

  std::vector<MonoidalSpace::Point> points;
  for (std::size_t i = 0; i < npts; ++i) {
    const Node& n = nodes[rep[i]];
    bool designated = false;
    for (std::size_t c = 0; c < charts.size(); ++c)
      if (sets.find(node_of[c].back()) == sets.find(rep[i])) designated = true;
    points.push_back(MonoidalSpace::Point{names[i], chart_local[n.chart][n.prime].stalk, designated});
  }
  std::map<std::pair<std::size_t, std::size_t>, MonoidMap> edge_maps;
  for (std::size_t c = 0; c < charts.size(); ++c)
    for (std::size_t a = 0; a < chart_faces[c].size(); ++a)
      for (std::size_t b = 0; b < chart_faces[c].size(); ++b) {
        const auto& fa = chart_faces[c][a];
        const auto& fb = chart_faces[c][b];
        if (a == b || !std::includes(fa.begin(), fa.end(), fb.begin(), fb.end())) continue;
        const std::size_t na = node_of[c][a], nb = node_of[c][b];
        const std::size_t ca = class_index[sets.find(na)], cb = class_index[sets.find(nb)];
        const auto& la = chart_local[c][a];
        const auto& lb = chart_local[c][b];
        MonoidMap m(static_cast<std::size_t>(la.stalk.rank), static_cast<std::size_t>(lb.stalk.rank));
        if (la.stalk.rank > 0 && lb.stalk.rank > 0)
          m = *to_rep[na] * (la.projection * lb.section) * unimodular_inverse(*to_rep[nb]);
        const auto key = std::make_pair(cb, ca);
        const auto it = edge_maps.find(key);
        if (it != edge_maps.end() && it->second != m) {
          result.obstruction = Obstruction{x.point(charts[c]).name, prime_text(nodes[nb]), prime_text(nodes[na]),
                                           "charts disagree on the generization " + names[cb] + " -> " + names[ca]};
          return result;
        }
        edge_maps[key] = m;
      }
  std::vector<MonoidalSpace::Edge> edges;
  for (const auto& [key, m] : edge_maps)
    if (key.first != key.second) edges.push_back(MonoidalSpace::Edge{key.first, key.second, m});

  KatoFan fan;
  try {
    fan.space = MonoidalSpace(std::move(points), std::move(edges));
  } catch (const InvalidInput& e) {
    result.obstruction = Obstruction{"", "", "", std::string("glued space is inconsistent: ") + e.what()};
    return result;
  }
  const FanCheck check = is_fan(fan.space);
  if (!check.ok) {
    result.obstruction = Obstruction{"", "", "", "glued space is not a fan: " + check.reason};
    return result;
  }
  fan.charts = check.charts;
  auto target = std::make_shared<const MonoidalSpace>(fan.space);
  FanMorphism f{std::make_shared<const MonoidalSpace>(x), target, std::move(point_map), std::move(stalk_maps)};
  validate_morphism(f);
  result.fan = std::move(fan);
  result.morphism = std::move(f);
  return result;
}

}  // namespace katofan
