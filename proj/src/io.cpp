#include "katofan/io.hpp"

#include <set>
#include <sstream>

#include "katofan/errors.hpp"

namespace katofan {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevel{"schema", "monoids", "cones", "fans", "spaces", "morphisms", "algebras", "graphs"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ParseError(path + "/" + k, "unknown key");
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(path, "missing key '" + key + "'");
  return *it;
}

Int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<Int>();
}

int as_small(const json& j, const std::string& path) {
  const Int v = as_int(j, path);
  if (v < 0 || v > 1'000'000) throw ParseError(path, "expected a non-negative size");
  return static_cast<int>(v);
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path, "expected a boolean");
  return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

Vec as_vec(const json& j, const std::string& path) {
  Vec v;
  std::size_t i = 0;
  for (const auto& x : as_array(j, path)) v.push_back(as_int(x, path + "/" + std::to_string(i++)));
  return v;
}

std::vector<Vec> as_vecs(const json& j, const std::string& path, std::optional<std::size_t> width = std::nullopt) {
  std::vector<Vec> out;
  std::size_t i = 0;
  for (const auto& x : as_array(j, path)) {
    const std::string p = path + "/" + std::to_string(i++);
    out.push_back(as_vec(x, p));
    if (width && out.back().size() != *width)
      throw ParseError(p, "expected " + std::to_string(*width) + " entries");
  }
  return out;
}

IntMatrix as_int_matrix(const json& j, const std::string& path, std::size_t cols) {
  return IntMatrix::from_rows(as_vecs(j, path, cols), cols);
}

Rational as_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<Int>());
  if (!j.is_string()) throw ParseError(path, "expected an integer or a \"p/q\" string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

RatMatrix as_rat_matrix(const json& j, const std::string& path, std::size_t n) {
  const json& rows = as_array(j, path);
  if (rows.size() != n) throw ParseError(path, "expected " + std::to_string(n) + " rows");
  RatMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string p = path + "/" + std::to_string(r);
    const json& row = as_array(rows[r], p);
    if (row.size() != n) throw ParseError(p, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = as_rational(row[c], p + "/" + std::to_string(c));
  }
  return m;
}

json vecs_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(v);
  return a;
}

json int_matrix_json(const IntMatrix& m) { return vecs_json(m.row_list()); }

json rat_matrix_json(const RatMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    a.push_back(row);
  }
  return a;
}

// Library errors raised while building an entity become invariant violations.
template <class F>
auto build(const std::string& entity, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const InvariantViolation&) {
    throw;
  } catch (const Error& e) {
    throw InvariantViolation(entity, e.what());
  }
}

AffineMonoid parse_monoid(const json& j, const std::string& path) {
  check_keys(j, {"ambient_rank", "generators", "sharp"}, path);
  const int r = as_small(field(j, "ambient_rank", path), path + "/ambient_rank");
  const auto gens = as_vecs(field(j, "generators", path), path + "/generators", static_cast<std::size_t>(r));
  const bool sharp = j.contains("sharp") && as_bool(j["sharp"], path + "/sharp");
  return build(path, [&] {
    AffineMonoid m(r, gens);
    if (sharp && !is_sharp(m)) throw InvariantViolation(path, "declared sharp but has nontrivial units");
    return m;
  });
}

RationalCone parse_cone(const json& j, const std::string& path) {
  check_keys(j, {"ambient_rank", "generators"}, path);
  const int r = as_small(field(j, "ambient_rank", path), path + "/ambient_rank");
  const auto gens = as_vecs(field(j, "generators", path), path + "/generators", static_cast<std::size_t>(r));
  return build(path, [&] { return RationalCone(r, gens); });
}

RationalFan parse_fan(const json& j, const std::string& path) {
  check_keys(j, {"ambient_rank", "cones"}, path);
  const int r = as_small(field(j, "ambient_rank", path), path + "/ambient_rank");
  std::vector<std::vector<Vec>> cones;
  std::size_t i = 0;
  for (const auto& c : as_array(field(j, "cones", path), path + "/cones")) {
    cones.push_back(as_vecs(c, path + "/cones/" + std::to_string(i), static_cast<std::size_t>(r)));
    ++i;
  }
  return build(path, [&] {
    std::vector<RationalCone> maximal;
    for (const auto& g : cones) maximal.emplace_back(r, g);
    RationalFan f = RationalFan::generated_by(r, maximal);
    const FanReport rep = validate_rational_fan(f);
    if (!rep.valid) throw InvariantViolation(path, rep.violation);
    return f;
  });
}

MonoidalSpace parse_space(const json& j, const std::string& path) {
  check_keys(j, {"points", "edges"}, path);
  std::vector<MonoidalSpace::Point> points;
  std::map<std::string, std::size_t> index;
  std::size_t i = 0;
  for (const auto& p : as_array(field(j, "points", path), path + "/points")) {
    const std::string pp = path + "/points/" + std::to_string(i++);
    check_keys(p, {"name", "rank", "generators", "labels", "designated"}, pp);
    MonoidalSpace::Point pt;
    pt.name = as_string(field(p, "name", pp), pp + "/name");
    const int r = as_small(field(p, "rank", pp), pp + "/rank");
    const auto gens = as_vecs(field(p, "generators", pp), pp + "/generators", static_cast<std::size_t>(r));
    std::vector<std::string> labels;
    if (p.contains("labels")) {
      std::size_t k = 0;
      for (const auto& l : as_array(p["labels"], pp + "/labels"))
        labels.push_back(as_string(l, pp + "/labels/" + std::to_string(k++)));
    }
    pt.designated = p.contains("designated") && as_bool(p["designated"], pp + "/designated");
    pt.stalk = build(path + " point '" + pt.name + "'", [&] { return Stalk::make(r, gens, labels); });
    if (!index.emplace(pt.name, points.size()).second) throw InvariantViolation(path, "duplicate point '" + pt.name + "'");
    points.push_back(std::move(pt));
  }
  std::vector<MonoidalSpace::Edge> edges;
  i = 0;
  if (j.contains("edges")) {
    for (const auto& e : as_array(j["edges"], path + "/edges")) {
      const std::string ep = path + "/edges/" + std::to_string(i++);
      check_keys(e, {"special", "generic", "map"}, ep);
      const std::string s = as_string(field(e, "special", ep), ep + "/special");
      const std::string g = as_string(field(e, "generic", ep), ep + "/generic");
      if (!index.count(s)) throw InvariantViolation(path, "edge refers to unknown point '" + s + "'");
      if (!index.count(g)) throw InvariantViolation(path, "edge refers to unknown point '" + g + "'");
      const std::size_t si = index[s], gi = index[g];
      const auto cols = static_cast<std::size_t>(points[si].stalk.rank);
      edges.push_back({si, gi, as_int_matrix(field(e, "map", ep), ep + "/map", cols)});
    }
  }
  return build(path, [&] { return MonoidalSpace(points, edges); });
}

MorphismSpec parse_morphism(const json& j, const std::string& path) {
  check_keys(j, {"source", "fan", "points"}, path);
  MorphismSpec m;
  m.source = as_string(field(j, "source", path), path + "/source");
  m.fan = as_string(field(j, "fan", path), path + "/fan");
  std::size_t i = 0;
  for (const auto& a : as_array(field(j, "points", path), path + "/points")) {
    const std::string ap = path + "/points/" + std::to_string(i++);
    check_keys(a, {"point", "image", "map"}, ap);
    MorphismSpec::Assignment as;
    as.point = as_string(field(a, "point", ap), ap + "/point");
    as.image = as_string(field(a, "image", ap), ap + "/image");
    // Column count is fixed once the source is resolved; keep raw rows here.
    const auto rows = as_vecs(field(a, "map", ap), ap + "/map");
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows)
      if (r.size() != cols) throw ParseError(ap + "/map", "ragged rows");
    as.map = IntMatrix::from_rows(rows, cols);
    m.assignments.push_back(std::move(as));
  }
  return m;
}

MatrixAlgebra parse_algebra(const json& j, const std::string& path) {
  check_keys(j, {"dim_v", "basis", "unit", "weights", "generators", "unital"}, path);
  const auto n = static_cast<std::size_t>(as_small(field(j, "dim_v", path), path + "/dim_v"));
  auto matrices = [&](const std::string& key) {
    std::vector<RatMatrix> ms;
    std::size_t i = 0;
    for (const auto& m : as_array(field(j, key, path), path + "/" + key))
      ms.push_back(as_rat_matrix(m, path + "/" + key + "/" + std::to_string(i++), n));
    return ms;
  };
  if (j.contains("generators")) {
    if (j.contains("basis")) throw ParseError(path, "give either 'basis' or 'generators'");
    const auto gens = matrices("generators");
    const bool unital = j.contains("unital") && as_bool(j["unital"], path + "/unital");
    if (gens.empty() && !unital) return MatrixAlgebra::make(n, {});
    return build(path, [&] {
      if (gens.empty()) return MatrixAlgebra::make(n, {RatMatrix::identity(n)}, RatMatrix::identity(n));
      return close_algebra(gens, unital);
    });
  }
  const auto basis = matrices("basis");
  std::optional<RatMatrix> unit;
  if (j.contains("unit")) unit = as_rat_matrix(j["unit"], path + "/unit", n);
  std::vector<int> weights;
  if (j.contains("weights")) {
    const Vec w = as_vec(j["weights"], path + "/weights");
    weights.assign(w.begin(), w.end());
  }
  return build(path, [&] { return MatrixAlgebra::make(n, basis, unit, weights); });
}

DualGraph parse_graph(const json& j, const std::string& path) {
  check_keys(j, {"vertices", "edges"}, path);
  std::vector<int> genus;
  std::size_t i = 0;
  for (const auto& v : as_array(field(j, "vertices", path), path + "/vertices")) {
    const std::string vp = path + "/vertices/" + std::to_string(i++);
    check_keys(v, {"genus"}, vp);
    genus.push_back(static_cast<int>(as_int(field(v, "genus", vp), vp + "/genus")));
  }
  std::vector<DualGraph::Edge> edges;
  i = 0;
  if (j.contains("edges")) {
    for (const auto& e : as_array(j["edges"], path + "/edges")) {
      const std::string ep = path + "/edges/" + std::to_string(i++);
      check_keys(e, {"ends", "length"}, ep);
      const Vec ends = as_vec(field(e, "ends", ep), ep + "/ends");
      if (ends.size() != 2 || ends[0] < 0 || ends[1] < 0) throw ParseError(ep + "/ends", "expected two vertex indices");
      const Int len = e.contains("length") ? as_int(e["length"], ep + "/length") : 1;
      edges.push_back({static_cast<std::size_t>(ends[0]), static_cast<std::size_t>(ends[1]), len});
    }
  }
  return build(path, [&] { return DualGraph::make(genus, edges); });
}

template <class T, class F>
void parse_section(const json& doc, const std::string& key, std::map<std::string, T>& out, F&& parse_one) {
  if (!doc.contains(key)) return;
  const json& sec = doc[key];
  if (!sec.is_object()) throw ParseError("/" + key, "expected an object of named entities");
  for (const auto& [name, value] : sec.items()) out.emplace(name, parse_one(value, "/" + key + "/" + name));
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

FanMorphism resolve_morphism(const Workspace& w, const MorphismSpec& m) {
  const std::string entity = "morphism from '" + m.source + "'";
  const auto sit = w.spaces.find(m.source);
  if (sit == w.spaces.end()) throw InvariantViolation(entity, "unknown space '" + m.source + "'");
  const auto fit = w.fans.find(m.fan);
  if (fit == w.fans.end()) throw InvariantViolation(entity, "unknown fan '" + m.fan + "'");
  auto source = std::make_shared<const MonoidalSpace>(sit->second);
  auto target = std::make_shared<const MonoidalSpace>(rational_to_kato(fit->second).space);
  FanMorphism f{source, target, std::vector<std::size_t>(source->size()), std::vector<MonoidMap>(source->size())};
  std::vector<bool> seen(source->size(), false);
  for (const auto& a : m.assignments) {
    const auto p = source->index_of(a.point);
    if (!p) throw InvariantViolation(entity, "unknown point '" + a.point + "'");
    const auto q = target->index_of(a.image);
    if (!q) throw InvariantViolation(entity, "unknown cone '" + a.image + "'");
    if (seen[*p]) throw InvariantViolation(entity, "point '" + a.point + "' assigned twice");
    seen[*p] = true;
    f.point_map[*p] = *q;
    const auto rows = static_cast<std::size_t>(source->stalk(*p).rank);
    const auto cols = static_cast<std::size_t>(target->stalk(*q).rank);
    // An empty row list parses as 0 x 0; reshape it when the stalk is trivial.
    f.stalk_maps[*p] = a.map.rows() == 0 && rows == 0 ? IntMatrix(0, cols) : a.map;
    if (f.stalk_maps[*p].rows() != rows || f.stalk_maps[*p].cols() != cols)
      throw InvariantViolation(entity, "stalk map at '" + a.point + "' has the wrong shape");
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw InvariantViolation(entity, "point '" + source->point(i).name + "' is not assigned");
  build(entity, [&] {
    validate_morphism(f);
    return 0;
  });
  return f;
}

Workspace from_json(const json& doc) {
  check_keys(doc, kTopLevel, "");
  if (doc.contains("schema") && as_int(doc["schema"], "/schema") != kSchemaVersion)
    throw ParseError("/schema", "unsupported schema version");
  Workspace w;
  parse_section(doc, "monoids", w.monoids, parse_monoid);
  parse_section(doc, "cones", w.cones, parse_cone);
  parse_section(doc, "fans", w.fans, parse_fan);
  parse_section(doc, "spaces", w.spaces, parse_space);
  parse_section(doc, "morphisms", w.morphisms, parse_morphism);
  parse_section(doc, "algebras", w.algebras, parse_algebra);
  parse_section(doc, "graphs", w.graphs, parse_graph);
  for (const auto& [name, m] : w.morphisms) {
    try {
      resolve_morphism(w, m);
    } catch (const InvariantViolation& e) {
      throw InvariantViolation("/morphisms/" + name, e.what());
    }
  }
  return w;
}

Workspace parse(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(document, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
  }
  return from_json(doc);
}

json to_json(const Workspace& w) {
  json doc = json::object();
  doc["schema"] = kSchemaVersion;
  for (const auto& [name, m] : w.monoids)
    doc["monoids"][name] = {{"ambient_rank", m.ambient_rank()}, {"generators", vecs_json(m.generators())}};
  for (const auto& [name, c] : w.cones)
    doc["cones"][name] = {{"ambient_rank", c.ambient_rank()}, {"generators", vecs_json(c.rays())}};
  for (const auto& [name, f] : w.fans) {
    json cones = json::array();
    for (std::size_t i : f.maximal_cones()) cones.push_back(vecs_json(f.cones[i].rays()));
    doc["fans"][name] = {{"ambient_rank", f.ambient_rank}, {"cones", cones}};
  }
  for (const auto& [name, x] : w.spaces) {
    json points = json::array(), edges = json::array();
    for (const auto& p : x.points()) {
      json pj = {{"name", p.name}, {"rank", p.stalk.rank}, {"generators", vecs_json(p.stalk.generators)}};
      if (!p.stalk.labels.empty()) pj["labels"] = p.stalk.labels;
      if (p.designated) pj["designated"] = true;
      points.push_back(pj);
    }
    for (const auto& e : x.edges())
      edges.push_back({{"special", x.point(e.special).name},
                       {"generic", x.point(e.generic).name},
                       {"map", int_matrix_json(e.map)}});
    doc["spaces"][name] = {{"points", points}, {"edges", edges}};
  }
  for (const auto& [name, m] : w.morphisms) {
    json pts = json::array();
    for (const auto& a : m.assignments)
      pts.push_back({{"point", a.point}, {"image", a.image}, {"map", int_matrix_json(a.map)}});
    doc["morphisms"][name] = {{"source", m.source}, {"fan", m.fan}, {"points", pts}};
  }
  for (const auto& [name, a] : w.algebras) {
    json basis = json::array();
    for (const auto& b : a.basis()) basis.push_back(rat_matrix_json(b));
    json aj = {{"dim_v", a.dim_v()}, {"basis", basis}};
    if (a.unit()) aj["unit"] = rat_matrix_json(*a.unit());
    if (!a.weights().empty()) aj["weights"] = a.weights();
    doc["algebras"][name] = aj;
  }
  for (const auto& [name, g] : w.graphs) {
    json vs = json::array(), es = json::array();
    for (int genus : g.genus) vs.push_back({{"genus", genus}});
    for (const auto& e : g.edges) es.push_back({{"ends", {e.a, e.b}}, {"length", e.length}});
    doc["graphs"][name] = {{"vertices", vs}, {"edges", es}};
  }
  return doc;
}

std::string serialize(const Workspace& w) { return to_json(w).dump(2) + "\n"; }

std::string to_dot(const MonoidalSpace& x, const std::string& graph_name) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "digraph " << quote(graph_name) << " {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << "  n" << i << " [label=" << quote(x.point(i).name);
    if (x.point(i).designated) os << ", shape=box";
    os << "];\n";
  }
  // Covering relations only.
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t g = 0; g < x.size(); ++g) {
      if (s == g || !x.generizes(g, s)) continue;
      bool covering = true;
      for (std::size_t m = 0; m < x.size() && covering; ++m)
        if (m != s && m != g && x.generizes(m, s) && x.generizes(g, m)) covering = false;
      if (covering) os << "  n" << s << " -> n" << g << ";\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace katofan
