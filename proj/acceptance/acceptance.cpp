// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "katofan/algebra.hpp"
#include "katofan/curve.hpp"
#include "katofan/errors.hpp"
#include "katofan/io.hpp"
#include "katofan/subdivision.hpp"

using namespace katofan;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(limit_seconds)) + " s limit)";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-34s %.2fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(KATOFAN_FIXTURES) + "/" + name + ".json");
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RationalFan face_fan(const RationalCone& c) { return RationalFan::generated_by(c.ambient_rank(), {c}); }

// ---- spec oracle ----------------------------------------------------------

// Primes by definition: for every subset T of the Hilbert basis, the ideal
// T + M is prime iff its complement, generated by the rest U, never meets
// it. Multiples of the sum of U are enough as test elements; the bound on the
// multiple comes from the coordinates.
std::set<std::vector<std::size_t>> brute_force_primes(const std::vector<Vec>& hb, int rank) {
  std::set<std::vector<std::size_t>> out;
  if (hb.empty()) {
    out.insert(std::vector<std::size_t>{});
    return out;
  }
  const RationalCone m(rank, hb);
  Int cap = 1;
  for (const Vec& a : m.facets())
    for (const Vec& h : hb) cap = std::max(cap, 1 + dot(a, h));
  const std::size_t k = hb.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> u, t;
    Vec sum(static_cast<std::size_t>(rank), 0);
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1) {
        u.push_back(i);
        sum = add(sum, hb[i]);
      } else {
        t.push_back(i);
      }
    }
    bool prime = true;
    for (Int n = 1; n <= cap && prime; ++n)
      for (std::size_t j : t)
        if (m.contains(sub(scale(n, sum), hb[j]))) {
          prime = false;
          break;
        }
    if (prime) out.insert(u);
  }
  return out;
}

Outcome spec_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> rk(1, 3), ng(1, 5), coord(0, 4);
  int checked = 0;
  while (checked < 120) {
    const int r = rk(rng);
    std::vector<Vec> gens(static_cast<std::size_t>(ng(rng)));
    for (auto& g : gens) {
      g.resize(static_cast<std::size_t>(r));
      for (auto& x : g) x = coord(rng);
    }
    const MonoidSpectrum s = spec(AffineMonoid(r, gens));
    std::set<std::vector<std::size_t>> got;
    for (const auto& p : s.primes) got.insert(p.complement_face);
    if (got.size() != s.primes.size()) return {false, "duplicate primes"};
    if (got != brute_force_primes(s.hilbert_basis, s.monoid.ambient_rank()))
      return {false, "mismatch on monoid #" + std::to_string(checked)};
    ++checked;
  }
  return {true, std::to_string(checked) + " monoids"};
}

// ---- duality ----------------------------------------------------------------

Outcome duality() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> coord(-4, 4), rk(1, 3), extra(0, 3);
  int checked = 0;
  while (checked < 250) {
    const int n = rk(rng);
    std::vector<Vec> gens(static_cast<std::size_t>(n + extra(rng)));
    for (auto& g : gens) {
      g.resize(static_cast<std::size_t>(n));
      for (auto& x : g) x = coord(rng);
    }
    const RationalCone c(n, gens);
    if (!c.is_strongly_convex()) continue;
    const RationalCone d = dual_cone(c);
    if (!(dual_cone(d) == c)) return {false, "involution fails on cone #" + std::to_string(checked)};
    ++checked;
  }
  return {true, std::to_string(checked) + " cones"};
}

// ---- free resolution ------------------------------------------------------

// Minimal resolution rays of cone((1,0),(a,b)), b > 0, from the
// Hirzebruch-Jung expansion of b/q after moving the cone to
// cone((0,1),(b,-q)).
std::set<Vec> hj_rays(Int a, Int b) {
  Int beta = 0;
  while (a + beta * b > 0) --beta;
  while (a + beta * b <= -b) ++beta;
  const Int q = -(a + beta * b);
  std::set<Vec> out;
  if (q == 0) return out;
  // Back to the original coordinates: (x, y) -> (-beta x + y, x).
  auto back = [&](const Vec& v) { return Vec{-beta * v[0] + v[1], v[0]}; };
  Vec prev{0, 1}, cur{1, 0};
  Int num = b, den = q;
  while (den > 0) {
    out.insert(back(cur));
    const Int c = (num + den - 1) / den;  // ceiling
    const Vec next{c * cur[0] - prev[0], c * cur[1] - prev[1]};
    const Int rest = c * den - num;
    num = den;
    den = rest;
    prev = cur;
    cur = next;
  }
  return out;
}

Outcome free_resolution_2d() {
  int cones = 0;
  for (Int b = 1; b <= 30; ++b)
    for (Int a = -b; a <= b; ++a) {
      if (std::gcd(a, b) != 1) continue;
      const RationalCone c(2, {{1, 0}, {a, b}});
      const Subdivision s = free_resolution(face_fan(c));
      const std::string where = " for (" + std::to_string(a) + "," + std::to_string(b) + ")";
      if (max_multiplicity(s.source) != 1) return {false, "non-unimodular output" + where};
      const SubdivisionReport rep = validate_finite_subdivision(s);
      if (!rep.valid || !rep.finite_fibers || !rep.surjective_groups || !rep.support_bijective)
        return {false, "invalid subdivision" + where};
      std::set<Vec> added;
      for (const Vec& r : s.source.rays())
        if (r != Vec{1, 0} && r != primitive(Vec{a, b})) added.insert(r);
      if (added != hj_rays(a, b)) return {false, "added rays differ from the continued fraction" + where};
      ++cones;
    }
  return {true, std::to_string(cones) + " cones, multiplicity up to 30"};
}

// ---- extraction -----------------------------------------------------------

Vec random_combination(const std::vector<Vec>& rays, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 3);
  Vec v(rays.front().size(), 0);
  bool any = false;
  for (const Vec& r : rays) {
    const int k = w(rng);
    if (k) any = true;
    v = add(v, scale(k, r));
  }
  if (!any) v = rays.front();
  return primitive(v);
}

Outcome extraction() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> coord(-2, 3), rk(2, 3), pick(0, 1);
  const RationalFan p2 = RationalFan::generated_by(
      2, {RationalCone(2, {{1, 0}, {0, 1}}), RationalCone(2, {{0, 1}, {-1, -1}}), RationalCone(2, {{-1, -1}, {1, 0}})});
  int checked = 0;
  while (checked < 60) {
    const int n = rk(rng);
    RationalFan f;
    RationalCone sigma;
    if (n == 2 && pick(rng)) {
      f = p2;
      sigma = f.cones[f.maximal_cones()[checked % 3]];
    } else {
      std::vector<Vec> gens(static_cast<std::size_t>(n + pick(rng)));
      for (auto& g : gens) {
        g.resize(static_cast<std::size_t>(n));
        for (auto& x : g) x = coord(rng);
      }
      sigma = RationalCone(n, gens);
      if (!sigma.is_strongly_convex() || sigma.dim() != n) continue;
      f = face_fan(sigma);
    }
    std::uniform_int_distribution<int> tdim(1, sigma.dim());
    std::vector<Vec> tgens;
    for (int i = tdim(rng); i > 0; --i) tgens.push_back(random_combination(sigma.rays(), rng));
    const RationalCone tau(n, tgens);
    const Subdivision s = extract_cone_subdivision(f, sigma, tau);
    if (!s.source.index_of(tau)) return {false, "tau missing on instance #" + std::to_string(checked)};
    if (!validate_finite_subdivision(s).valid) return {false, "invalid subdivision on instance #" + std::to_string(checked)};
    ++checked;
  }
  return {true, std::to_string(checked) + " instances"};
}

// ---- strictification ------------------------------------------------------

std::shared_ptr<const MonoidalSpace> point_with_stalk_n() {
  return std::make_shared<const MonoidalSpace>(
      std::vector<MonoidalSpace::Point>{{"x", Stalk::make(1, {{1}}), true}}, std::vector<MonoidalSpace::Edge>{});
}

Outcome strictification() {
  {
    const RationalFan quadrant = face_fan(RationalCone(2, {{1, 0}, {0, 1}}));
    auto x = std::make_shared<const MonoidalSpace>(rational_to_kato(quadrant).space);
    auto pt = point_with_stalk_n();
    const FanMorphism f{pt, x, {*x->index_of("cone((0,1),(1,0))")}, {IntMatrix::from_rows({{1, 1}})}};
    const Strictification s = strictify(pt, f, quadrant);
    if (!(s.subdivision.source == star_subdivide(quadrant, {1, 1}).source)) return {false, "diagonal fixture: wrong subdivision"};
    if (!s.strict) return {false, "diagonal fixture: not strict"};
  }
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> coord(-2, 3), rk(2, 3), extra(0, 1);
  int checked = 0;
  while (checked < 25) {
    const int n = rk(rng);
    std::vector<Vec> gens(static_cast<std::size_t>(n + extra(rng)));
    for (auto& g : gens) {
      g.resize(static_cast<std::size_t>(n));
      for (auto& v : g) v = coord(rng);
    }
    const RationalCone sigma(n, gens);
    if (!sigma.is_strongly_convex() || sigma.dim() != n) continue;
    const RationalFan fan = face_fan(sigma);
    auto x = std::make_shared<const MonoidalSpace>(rational_to_kato(fan).space);
    const std::size_t closed = *x->index_of(describe_cone(sigma));
    const Stalk& p = x->stalk(closed);
    // A local surjective map P -> N is a primitive vector in the interior of
    // the cone dual to P in group coordinates.
    // A local surjective map P -> N: positive on the Hilbert basis and equal
    // to 1 somewhere.
    std::uniform_int_distribution<int> wc(-4, 4);
    Vec w(static_cast<std::size_t>(p.rank));
    Int low = 0;
    for (int attempt = 0; attempt < 200 && low != 1; ++attempt) {
      for (auto& v : w) v = wc(rng);
      low = std::numeric_limits<Int>::max();
      for (const Vec& h : p.generators) low = std::min(low, dot(w, h));
    }
    if (low != 1) continue;
    auto pt = point_with_stalk_n();
    const FanMorphism f{pt, x, {closed}, {IntMatrix::from_rows({w})}};
    validate_morphism(f);
    const Strictification s = strictify(pt, f, fan);
    if (!s.strict) return {false, "not strict on instance #" + std::to_string(checked)};
    if (!validate_finite_subdivision(s.subdivision).valid)
      return {false, "invalid subdivision on instance #" + std::to_string(checked)};
    ++checked;
  }
  return {true, "diagonal fixture plus " + std::to_string(checked) + " random instances"};
}

// ---- two-chart gluing -----------------------------------------------------

Outcome gluing_counterexample() {
  RunOptions o;
  o.verb = "assoc-fan";
  const RunResult bad = run_document(slurp("two_chart_gluing"), o);
  if (bad.exit_code != 2) return {false, "expected exit 2, got " + std::to_string(bad.exit_code)};
  const std::string msg = bad.report.value("/obstruction/message"_json_pointer, std::string());
  if (msg.find("prime(x₃) identified with prime(x₄)") == std::string::npos) return {false, "message: " + msg};
  const RunResult good = run_document(slurp("consistent_gluing"), o);
  if (good.exit_code != 0) return {false, "control fixture failed"};
  return {true, "\"" + msg + "\", exit 2; control exits 0"};
}

// ---- algebras -------------------------------------------------------------

Subspace span_of(const std::vector<RatMatrix>& ms, std::size_t n) {
  std::vector<RatVec> flat;
  for (const auto& m : ms) flat.push_back(flatten(m));
  return Subspace(n * n, flat);
}

bool nilpotent(const RatMatrix& m) {
  RatMatrix p = m;
  for (std::size_t i = 1; i < m.rows(); ++i) p = p * m;
  return p.is_zero();
}

Outcome trace_radical_library() {
  const auto fixtures = algebra_fixtures();
  if (fixtures.size() != 12) return {false, "fixture library has " + std::to_string(fixtures.size()) + " algebras"};
  for (const auto& f : fixtures) {
    const RadicalResult r = trace_radical(f.algebra);
    const std::size_t n = f.algebra.dim_v();
    if (!(span_of(r.basis, n) == span_of(f.radical, n))) return {false, f.name + ": radical differs"};
    for (const auto& b : r.basis)
      if (!nilpotent(b)) return {false, f.name + ": radical element not nilpotent"};
    if (!r.two_sided_ideal || !r.nilpotent) return {false, f.name + ": certificate failed"};
    const QuotientResult q = num_equiv_quotient(f.algebra);
    if (!q.certificate.semisimple || q.algebra.dim() + r.basis.size() != f.algebra.dim())
      return {false, f.name + ": quotient not semisimple"};
  }
  return {true, "12 algebras"};
}

// ---- curves ---------------------------------------------------------------

DualGraph random_connected(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 8), gd(0, 2), len(1, 5);
  const int v = nv(rng);
  std::vector<int> genus(static_cast<std::size_t>(v));
  for (auto& g : genus) g = gd(rng);
  std::vector<DualGraph::Edge> edges;
  for (int i = 1; i < v; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    edges.push_back({static_cast<std::size_t>(parent(rng)), static_cast<std::size_t>(i), len(rng)});
  }
  std::uniform_int_distribution<int> extra(0, 14 - (v - 1)), end(0, v - 1);
  for (int k = extra(rng); k > 0; --k)
    edges.push_back({static_cast<std::size_t>(end(rng)), static_cast<std::size_t>(end(rng)), len(rng)});
  return DualGraph::make(genus, edges);
}

Outcome log_tate() {
  const Log1Motif m = log_jacobian_motif(DualGraph::make({0}, {{0, 0, 1}}));
  const std::map<int, int> want{{-2, 1}, {-1, 0}, {0, 1}};
  if (m.graded_dims != want || m.total_dim() != 2) return {false, "wrong graded dimensions"};
  return {true, "dims (1, 0, 1), total 2"};
}

Outcome pairing_positivity() {
  std::mt19937_64 rng(505);
  int checked = 0, nontrivial = 0;
  for (; checked < 60; ++checked) {
    const DualGraph g = random_connected(rng);
    const Log1Motif m = log_jacobian_motif(g);
    const PolarizationReport p = polarization_check(m, IntMatrix::identity(static_cast<std::size_t>(m.gamma_rank)));
    if (!p.positive_definite || !p.symmetric) return {false, "graph #" + std::to_string(checked) + " not positive definite"};
    for (Int minor : p.leading_minors)
      if (minor <= 0) return {false, "non-positive minor"};
    if (m.gamma_rank > 0) ++nontrivial;
  }
  return {true, std::to_string(checked) + " graphs (" + std::to_string(nontrivial) + " with cycles)"};
}

Outcome monodromy_weight() {
  std::mt19937_64 rng(606);
  int checked = 0;
  for (; checked < 60; ++checked) {
    const FilteredNilpotentOperator f = monodromy_operator(log_jacobian_motif(random_connected(rng)));
    if (!(f.n * f.n).is_zero()) return {false, "N^2 != 0"};
    if (!monodromy_filtration(f).matches) return {false, "M != W on motif #" + std::to_string(checked)};
  }
  return {true, std::to_string(checked) + " motifs"};
}

Outcome punctured_sweep() {
  int cases = 0;
  for (int g = 0; g <= 3; ++g)
    for (int b1 = 0; b1 <= 3; ++b1) {
      // Two shapes per (g, b1): one vertex with loops, and a chain of two
      // vertices joined by b1 + 1 edges.
      std::vector<DualGraph> graphs;
      std::vector<DualGraph::Edge> loops(static_cast<std::size_t>(b1), DualGraph::Edge{0, 0, 1});
      graphs.push_back(DualGraph::make({g}, loops));
      std::vector<DualGraph::Edge> parallel(static_cast<std::size_t>(b1 + 1), DualGraph::Edge{0, 1, 2});
      graphs.push_back(DualGraph::make({g, 0}, parallel));
      for (const auto& gr : graphs)
        for (int n = 1; n <= 5; ++n) {
          const PuncturedH1 h = punctured_h1(gr, n);
          if (h.total_dim() != 2 * g + 2 * b1 + (n - 1)) return {false, "wrong total"};
          if (n == 1 && !(h.closed == log_jacobian_motif(gr) && h.total_dim() == h.closed.total_dim()))
            return {false, "n = 1 differs from the closed curve"};
          ++cases;
        }
    }
  return {true, std::to_string(cases) + " cases"};
}

// ---- CLI --------------------------------------------------------------------

Outcome cli_round_trip() {
  const std::vector<std::string> fixtures{"two_chart_gluing", "consistent_gluing", "resolve_cone", "upper_triangular",
                                          "diagonal_point",   "tate_curve",        "extract",      "library"};
  int reports = 0;
  for (const auto& name : fixtures) {
    const std::string doc = slurp(name);
    const Workspace w = parse(doc);
    const std::string text = serialize(w);
    if (!(parse(text) == w) || serialize(parse(text)) != text) return {false, name + ": round trip differs"};
    for (const auto& verb : kVerbs) {
      RunOptions o;
      o.verb = verb;
      o.sigma = "sigma";
      o.tau = "tau";
      const RunResult a = run_document(doc, o), b = run_document(doc, o);
      if (a.report.dump(2) != b.report.dump(2) || a.dot != b.dot) return {false, name + " " + verb + ": reports differ"};
      ++reports;
    }
  }
  return {true, std::to_string(fixtures.size()) + " fixtures, " + std::to_string(reports) + " report pairs"};
}

}  // namespace

int main() {
  criterion("spec matches prime enumeration", 10, spec_oracle);
  criterion("duality involution", 5, duality);
  criterion("2D free resolution", 5, free_resolution_2d);
  criterion("cone extraction", 30, extraction);
  criterion("strictification", 0, strictification);
  criterion("two-chart gluing obstruction", 0, gluing_counterexample);
  criterion("trace radical = Jacobson radical", 0, trace_radical_library);
  criterion("log Tate curve", 0, log_tate);
  criterion("monodromy pairing positivity", 0, pairing_positivity);
  criterion("monodromy-weight for curves", 0, monodromy_weight);
  criterion("punctured H1 dimensions", 0, punctured_sweep);
  criterion("CLI determinism and round trip", 0, cli_round_trip);
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
