#include <algorithm>
#include <set>

#include "katofan/errors.hpp"
#include "katofan/io.hpp"
#include "katofan/subdivision.hpp"

namespace katofan {

using nlohmann::json;

namespace {

// Bad command-line usage: a missing entity or option.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string error_kind(const std::exception& e) {
#define KATOFAN_KIND(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  KATOFAN_KIND(ParseError)
  KATOFAN_KIND(InvariantViolation)
  KATOFAN_KIND(UsageError)
  KATOFAN_KIND(ArithmeticOverflow)
  KATOFAN_KIND(ElementNotInMonoid)
  KATOFAN_KIND(NotAnIdeal)
  KATOFAN_KIND(NotStronglyConvex)
  KATOFAN_KIND(NotSimplicial)
  KATOFAN_KIND(NotSharp)
  KATOFAN_KIND(InvalidFan)
  KATOFAN_KIND(VectorOutsideSupport)
  KATOFAN_KIND(ResolutionBudgetExceeded)
  KATOFAN_KIND(NotContained)
  KATOFAN_KIND(HypothesisViolated)
  KATOFAN_KIND(InvalidInput)
  KATOFAN_KIND(DimensionMismatch)
  KATOFAN_KIND(NotNilpotent)
  KATOFAN_KIND(InvalidPunctureCount)
#undef KATOFAN_KIND
  return "Error";
}

bool is_input_error(const std::exception& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvariantViolation*>(&e) ||
         dynamic_cast<const UsageError*>(&e) || dynamic_cast<const InvalidInput*>(&e) ||
         dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const InvalidPunctureCount*>(&e) ||
         !dynamic_cast<const Error*>(&e);
}

template <class T>
std::pair<std::string, const T*> pick(const std::map<std::string, T>& m, const std::string& kind,
                                      const std::optional<std::string>& name) {
  if (name) {
    const auto it = m.find(*name);
    if (it == m.end()) throw UsageError("no " + kind + " named '" + *name + "'");
    return {it->first, &it->second};
  }
  if (m.size() != 1) throw UsageError("expected exactly one " + kind + "; choose one with --entity");
  return {m.begin()->first, &m.begin()->second};
}

// Fans, or a single cone read as the fan of its faces.
std::pair<std::string, RationalFan> pick_fan(const Workspace& w, const std::optional<std::string>& name) {
  if (name) {
    if (auto it = w.fans.find(*name); it != w.fans.end()) return {it->first, it->second};
    if (auto it = w.cones.find(*name); it != w.cones.end()) {
      if (!it->second.is_strongly_convex()) throw UsageError("cone '" + *name + "' is not strongly convex");
      return {it->first, RationalFan::generated_by(it->second.ambient_rank(), {it->second})};
    }
    throw UsageError("no fan or cone named '" + *name + "'");
  }
  if (w.fans.size() == 1) return {w.fans.begin()->first, w.fans.begin()->second};
  if (w.fans.empty() && w.cones.size() == 1) return pick_fan(w, w.cones.begin()->first);
  throw UsageError("expected exactly one fan; choose one with --entity");
}

const RationalCone& named_cone(const Workspace& w, const std::optional<std::string>& name, const std::string& opt) {
  if (!name) throw UsageError("--" + opt + " is required");
  const auto it = w.cones.find(*name);
  if (it == w.cones.end()) throw UsageError("no cone named '" + *name + "'");
  return it->second;
}

json rat_matrix(const RatMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    a.push_back(row);
  }
  return a;
}

json int_matrix(const IntMatrix& m) {
  json a = json::array();
  for (const auto& r : m.row_list()) a.push_back(r);
  return a;
}

json points_of(const MonoidalSpace& x) {
  json pts = json::array();
  for (const auto& p : x.points()) {
    json pj = {{"name", p.name}, {"rank", p.stalk.rank}};
    if (p.designated) pj["designated"] = true;
    pts.push_back(pj);
  }
  return pts;
}

json validation_json(const SubdivisionReport& r) {
  json j = {{"valid", r.valid},
            {"finite_fibers", r.finite_fibers},
            {"surjective_groups", r.surjective_groups},
            {"support_bijective", r.support_bijective},
            {"box_bound", r.box_bound}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

// Report body shared by every verb that produces a subdivision.
json subdivision_json(const Subdivision& s, SubdivisionReport* out = nullptr) {
  const auto old_rays = s.target.rays();
  const std::set<Vec> before(old_rays.begin(), old_rays.end());
  json added = json::array();
  for (const Vec& r : s.source.rays())
    if (!before.count(r)) added.push_back(r);
  json cones = json::array();
  for (std::size_t i : s.source.maximal_cones())
    cones.push_back({{"cone", describe_cone(s.source.cones[i])}, {"multiplicity", multiplicity(s.source.cones[i])}});
  const SubdivisionReport rep = validate_finite_subdivision(s);
  if (out) *out = rep;
  return {{"added_rays", added},
          {"cones", cones},
          {"max_multiplicity", max_multiplicity(s.source)},
          {"identity", s.is_identity()},
          {"validation", validation_json(rep)}};
}

RunResult verb_spec(const Workspace& w, const RunOptions& o) {
  const auto [name, m] = pick(w.monoids, "monoid", o.entity);
  const KatoFan k = spec_to_space(*m);
  const MonoidSpectrum sp = spec(*m);
  json gens = json::array();
  for (const auto& e : k.space.edges())
    gens.push_back({{"special", k.space.point(e.special).name}, {"generic", k.space.point(e.generic).name}});
  RunResult r;
  r.report = {{"entity", name},
              {"hilbert_basis", sp.hilbert_basis},
              {"points", points_of(k.space)},
              {"generizations", gens},
              {"prime_count", sp.primes.size()}};
  r.dot = to_dot(k.space, name);
  return r;
}

RunResult verb_check_fan(const Workspace& w, const RunOptions& o) {
  RunResult r;
  const bool space = o.entity ? w.spaces.count(*o.entity) > 0 : (w.spaces.size() == 1 && w.fans.empty() && w.cones.empty());
  if (space) {
    const auto [name, x] = pick(w.spaces, "space", o.entity);
    const FanCheck c = is_fan(*x);
    r.report = {{"entity", name}, {"is_fan", c.ok}, {"points", points_of(*x)}};
    if (!c.ok) {
      r.report["reason"] = c.reason;
      if (c.failing_point) r.report["failing_point"] = x->point(*c.failing_point).name;
      r.exit_code = 2;
    }
    r.dot = to_dot(*x, name);
    return r;
  }
  const auto [name, f] = pick_fan(w, o.entity);
  const FanReport rep = validate_rational_fan(f);
  const KatoFan k = rational_to_kato(f);
  json cones = json::array();
  for (const auto& c : f.cones) cones.push_back(describe_cone(c));
  r.report = {{"entity", name}, {"is_fan", rep.valid}, {"cones", cones}, {"rays", f.rays()},
              {"kato_points", k.space.size()}, {"strongly_convex", true}};
  if (!rep.valid) {
    r.report["reason"] = rep.violation;
    r.exit_code = 2;
  }
  r.dot = to_dot(k.space, name);
  return r;
}

RunResult verb_assoc_fan(const Workspace& w, const RunOptions& o) {
  const auto [name, x] = pick(w.spaces, "space", o.entity);
  const AssociatedFan a = build_associated_fan(*x, o.mode);
  RunResult r;
  r.report = {{"entity", name}, {"mode", o.mode == AssocMode::log_regular ? "log-regular" : "standard-log-point"}};
  if (!a.ok()) {
    const Obstruction& ob = *a.obstruction;
    r.report["obstruction"] = {{"chart", ob.chart}, {"first", ob.first}, {"second", ob.second}, {"message", ob.message}};
    r.exit_code = 2;
    return r;
  }
  const MonoidalSpace& fan = a.fan->space;
  json image = json::object();
  for (std::size_t i = 0; i < x->size(); ++i) image[x->point(i).name] = fan.point(a.morphism->point_map[i]).name;
  r.report["points"] = points_of(fan);
  r.report["image"] = image;
  r.report["strict"] = is_strict(*a.morphism);
  r.dot = to_dot(fan, name);
  return r;
}

RunResult subdivision_result(const std::string& name, const Subdivision& s) {
  RunResult r;
  SubdivisionReport rep;
  r.report = subdivision_json(s, &rep);
  r.report["entity"] = name;
  if (!rep.valid) r.exit_code = 2;
  r.dot = to_dot(rational_to_kato(s.source).space, name);
  return r;
}

RunResult verb_resolve(const Workspace& w, const RunOptions& o) {
  const auto [name, f] = pick_fan(w, o.entity);
  RunResult r = subdivision_result(name, free_resolution(f, o.budget));
  r.report["unimodular"] = r.report["max_multiplicity"] == 1;
  return r;
}

RunResult verb_subdivide(const Workspace& w, const RunOptions& o) {
  if (!o.star) throw UsageError("--star is required");
  const auto [name, f] = pick_fan(w, o.entity);
  RunResult r = subdivision_result(name, star_subdivide(f, *o.star));
  r.report["star"] = *o.star;
  return r;
}

RunResult verb_extract(const Workspace& w, const RunOptions& o) {
  const auto [name, f] = pick_fan(w, o.entity);
  const RationalCone& sigma = named_cone(w, o.sigma, "sigma");
  const RationalCone& tau = named_cone(w, o.tau, "tau");
  const Subdivision s = extract_cone_subdivision(f, sigma, tau);
  RunResult r = subdivision_result(name, s);
  r.report["sigma"] = describe_cone(sigma);
  r.report["tau"] = describe_cone(tau);
  r.report["contains_tau"] = s.source.index_of(tau).has_value();
  return r;
}

json fiber_points(const FiberProduct& fp) {
  json pts = json::array();
  for (std::size_t i = 0; i < fp.space->size(); ++i)
    pts.push_back({{"name", fp.space->point(i).name},
                   {"over", fp.to_x.target->point(fp.to_x.point_map[i]).name},
                   {"cone", fp.to_fan.target->point(fp.to_fan.point_map[i]).name},
                   {"rank", fp.space->stalk(i).rank}});
  return pts;
}

RunResult verb_strictify(const Workspace& w, const RunOptions& o) {
  const auto [name, m] = pick(w.morphisms, "morphism", o.entity);
  const FanMorphism f = resolve_morphism(w, *m);
  const Strictification s = strictify(f.source, f, w.fans.at(m->fan));
  RunResult r;
  SubdivisionReport rep;
  r.report = subdivision_json(s.subdivision, &rep);
  r.report["entity"] = name;
  r.report["strict_before"] = is_strict(f);
  r.report["strict"] = s.strict;
  r.report["points"] = fiber_points(s.pulled_back);
  if (!s.strict || !rep.valid) r.exit_code = 2;
  r.dot = to_dot(*s.pulled_back.space, name);
  return r;
}

RunResult verb_fiber(const Workspace& w, const RunOptions& o) {
  const auto [name, m] = pick(w.morphisms, "morphism", o.entity);
  const FanMorphism f = resolve_morphism(w, *m);
  const RationalFan& fan = w.fans.at(m->fan);
  const Subdivision s = o.star ? star_subdivide(fan, *o.star) : free_resolution(fan, o.budget);
  const FiberProduct fp = fiber_product(f.source, f, s);
  RunResult r;
  SubdivisionReport rep;
  r.report = {{"entity", name},
              {"subdivision", subdivision_json(s, &rep)},
              {"points", fiber_points(fp)},
              {"strict_over_fan", is_strict(fp.to_fan)}};
  if (!rep.valid) r.exit_code = 2;
  r.dot = to_dot(*fp.space, name);
  return r;
}

RunResult verb_radical(const Workspace& w, const RunOptions& o) {
  const auto [name, a] = pick(w.algebras, "algebra", o.entity);
  const RadicalResult rad = trace_radical(*a);
  const QuotientResult q = num_equiv_quotient(*a);
  const SemisimplicityCertificate cert = certify_semisimple(*a);
  json basis = json::array();
  for (const auto& b : rad.basis) basis.push_back(rat_matrix(b));
  RunResult r;
  r.report = {{"entity", name},
              {"dim", a->dim()},
              {"radical_dim", rad.basis.size()},
              {"radical_basis", basis},
              {"two_sided_ideal", rad.two_sided_ideal},
              {"nilpotent", rad.nilpotent},
              {"nilpotency_checks", rad.nilpotency_checks},
              {"semisimple", cert.semisimple},
              {"quotient_dim", q.algebra.dim()},
              {"quotient_semisimple", q.certificate.semisimple},
              {"traces_rational", q.traces_rational}};
  if (cert.gram_determinant) r.report["gram_determinant"] = cert.gram_determinant->str();
  if (cert.witness) r.report["witness"] = rat_matrix(*cert.witness);
  if (!rad.two_sided_ideal || !rad.nilpotent || !q.certificate.semisimple) r.exit_code = 2;
  return r;
}

RunResult verb_curve(const Workspace& w, const RunOptions& o) {
  const auto [name, g] = pick(w.graphs, "graph", o.entity);
  const Log1Motif m = log_jacobian_motif(*g);
  const PolarizationReport pol =
      polarization_check(m, IntMatrix::identity(static_cast<std::size_t>(m.gamma_rank)));
  const FilteredNilpotentOperator n = monodromy_operator(m);
  const MonodromyComparison cmp = monodromy_filtration(n);
  const PuncturedH1 h = punctured_h1(*g, o.punctures);
  json dims = json::object();
  for (const auto& [wt, d] : m.graded_dims) dims[std::to_string(wt)] = d;
  json cycles = json::array();
  for (const auto& c : cycle_space(*g)) cycles.push_back(c);
  RunResult r;
  r.report = {{"entity", name},
              {"gamma_rank", m.gamma_rank},
              {"torus_rank", m.torus_rank},
              {"abelian_dim", m.abelian_dim},
              {"cycles", cycles},
              {"pairing", int_matrix(m.pairing)},
              {"graded_dims", dims},
              {"total_dim", m.total_dim()},
              {"warnings", m.warnings},
              {"polarization",
               {{"invertible", pol.invertible},
                {"symmetric", pol.symmetric},
                {"positive_definite", pol.positive_definite},
                {"leading_minors", pol.leading_minors}}},
              {"monodromy",
               {{"operator", rat_matrix(n.n)}, {"center", n.center}, {"matches_weight", cmp.matches}}},
              {"punctured",
               {{"punctures", o.punctures},
                {"extra_rank", h.puncture_rank},
                {"total_dim", h.total_dim()},
                {"extension_class", h.extension_class}}}};
  if (cmp.witness_weight) r.report["monodromy"]["witness_weight"] = *cmp.witness_weight;
  if (!cmp.matches) r.exit_code = 2;
  return r;
}

}  // namespace

RunResult run(const Workspace& w, const RunOptions& o) {
  RunResult r;
  try {
    if (o.verb == "spec") r = verb_spec(w, o);
    else if (o.verb == "check-fan") r = verb_check_fan(w, o);
    else if (o.verb == "assoc-fan") r = verb_assoc_fan(w, o);
    else if (o.verb == "resolve") r = verb_resolve(w, o);
    else if (o.verb == "subdivide") r = verb_subdivide(w, o);
    else if (o.verb == "extract") r = verb_extract(w, o);
    else if (o.verb == "strictify") r = verb_strictify(w, o);
    else if (o.verb == "fiber") r = verb_fiber(w, o);
    else if (o.verb == "radical") r = verb_radical(w, o);
    else if (o.verb == "curve") r = verb_curve(w, o);
    else throw UsageError("unknown verb '" + o.verb + "'");
  } catch (const std::exception& e) {
    r = RunResult{};
    r.report = {{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}};
    r.exit_code = is_input_error(e) ? 1 : 2;
  }
  r.report["schema"] = kSchemaVersion;
  r.report["verb"] = o.verb;
  r.report["status"] = r.exit_code == 0 ? "ok" : r.exit_code == 1 ? "error" : "failure";
  return r;
}

RunResult run_document(std::string_view document, const RunOptions& o) {
  Workspace w;
  try {
    w = parse(document);
  } catch (const std::exception& e) {
    RunResult r;
    r.report = {{"error", {{"kind", error_kind(e)}, {"message", e.what()}}},
                {"schema", kSchemaVersion},
                {"verb", o.verb},
                {"status", "error"}};
    r.exit_code = 1;
    return r;
  }
  return run(w, o);
}

}  // namespace katofan
