#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "katofan/errors.hpp"
#include "katofan/io.hpp"

using namespace katofan;

namespace {

const std::vector<std::string> kFixtures{"two_chart_gluing", "consistent_gluing", "resolve_cone", "upper_triangular",
                                         "diagonal_point",   "tate_curve",        "extract",      "library"};

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(KATOFAN_FIXTURES) + "/" + name + ".json");
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run_fixture(const std::string& name, RunOptions o) { return run_document(slurp(name), o); }

RunOptions verb(std::string v) {
  RunOptions o;
  o.verb = std::move(v);
  return o;
}

}  // namespace

TEST_CASE("minimal document") {
  const Workspace w = parse(R"({"monoids": {"m": {"ambient_rank": 1, "generators": [[1]]}}})");
  CHECK(w.monoids.size() == 1);
  CHECK(w.monoids.at("m").generators() == std::vector<Vec>{{1}});
  CHECK(w.cones.empty());
}

TEST_CASE("shipped two-chart fixture") {
  const Workspace w = parse(slurp("two_chart_gluing"));
  REQUIRE(w.spaces.count("asfan2"));
  const MonoidalSpace& x = w.spaces.at("asfan2");
  CHECK(x.size() == 4);
  CHECK(x.point(0).designated);
  CHECK(x.point(1).designated);
  const auto& labels = x.stalk(0).labels;
  CHECK(std::find(labels.begin(), labels.end(), "x₃") != labels.end());
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(parse(R"({"monoids": {"m": {"ambient_rank": 1, "generators": [[1],[-1]], "sharp": true}}})"),
                  InvariantViolation);
  CHECK_THROWS_AS(
      parse(R"({"spaces": {"s": {"points": [{"name": "p", "rank": 1, "generators": [[1],[-1]]}], "edges": []}}})"),
      InvariantViolation);
  CHECK_THROWS_AS(parse(R"({"fans": {"f": {"ambient_rank": 2, "cones": [[[1,0],[1,2]], [[1,1],[0,1]]]}}})"),
                  InvariantViolation);
  CHECK_THROWS_AS(parse(R"({"graphs": {"g": {"vertices": [{"genus": -1}]}}})"), InvariantViolation);

  try {
    parse("{\n  \"monoids\": {\n    \"m\": [1,\n  }\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.path().rfind("line 4", 0) == 0);
  }
  try {
    parse(R"({"monoids": {"m": {"ambient_rank": 1, "generator": [[1]]}}})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.path() == "/monoids/m/generator");
  }
  CHECK_THROWS_AS(parse(R"({"schema": 2})"), ParseError);
  CHECK_THROWS_AS(parse(R"({"cones": {"c": {"ambient_rank": 2, "generators": [[1,0,0]]}}})"), ParseError);
  CHECK_THROWS_AS(parse(R"({"algebras": {"a": {"dim_v": 1, "basis": [[["x"]]]}}})"), ParseError);
}

TEST_CASE("morphisms resolve against their fan") {
  const Workspace w = parse(slurp("diagonal_point"));
  const FanMorphism f = resolve_morphism(w, w.morphisms.at("diagonal"));
  CHECK(f.stalk_maps[0] == IntMatrix::from_rows({{1, 1}}));
  CHECK_FALSE(is_strict(f));

  std::string bad = slurp("diagonal_point");
  bad.replace(bad.find("cone((0,1),(1,0))"), 17, "cone((1,1))");
  CHECK_THROWS_AS(parse(bad), InvariantViolation);
}

TEST_CASE("round trip on every fixture") {
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const Workspace w = parse(slurp(name));
    const std::string text = serialize(w);
    const Workspace back = parse(text);
    CHECK(back == w);
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("rationals serialize as strings") {
  const Workspace w = parse(slurp("library"));
  const auto j = to_json(w);
  CHECK(j["algebras"]["half"]["basis"][0][0][0] == "1/2");
  CHECK(j["schema"] == 1);
}

TEST_CASE("resolve a cone of multiplicity two") {
  const RunResult r = run_fixture("resolve_cone", verb("resolve"));
  CHECK(r.exit_code == 0);
  CHECK(r.report["added_rays"] == nlohmann::json::array({{1, 1}}));
  for (const auto& c : r.report["cones"]) CHECK(c["multiplicity"] == 1);
  CHECK(r.report["validation"]["valid"] == true);
  CHECK(r.report["status"] == "ok");
}

TEST_CASE("assoc-fan on the two fixtures") {
  const RunResult bad = run_fixture("two_chart_gluing", verb("assoc-fan"));
  CHECK(bad.exit_code == 2);
  const std::string msg = bad.report["obstruction"]["message"];
  CHECK(msg.find("prime(x₃) identified with prime(x₄)") != std::string::npos);

  const RunResult good = run_fixture("consistent_gluing", verb("assoc-fan"));
  CHECK(good.exit_code == 0);
  CHECK(good.report["strict"] == true);
  CHECK(good.report["points"].size() == 5);
}

TEST_CASE("radical, strictify, extract and curve verbs") {
  const RunResult rad = run_fixture("upper_triangular", verb("radical"));
  CHECK(rad.exit_code == 0);
  CHECK(rad.report["radical_dim"] == 1);
  CHECK(rad.report["quotient_dim"] == 2);

  const RunResult st = run_fixture("diagonal_point", verb("strictify"));
  CHECK(st.exit_code == 0);
  CHECK(st.report["strict"] == true);
  CHECK(st.report["strict_before"] == false);
  CHECK(st.report["added_rays"] == nlohmann::json::array({{1, 1}}));
  CHECK(st.report["points"][0]["cone"] == "cone((1,1))");

  RunOptions ex = verb("extract");
  ex.sigma = "sigma";
  ex.tau = "tau";
  const RunResult e = run_fixture("extract", ex);
  CHECK(e.exit_code == 0);
  CHECK(e.report["contains_tau"] == true);

  const RunResult c = run_fixture("tate_curve", verb("curve"));
  CHECK(c.exit_code == 0);
  CHECK(c.report["graded_dims"] == nlohmann::json({{"-2", 1}, {"-1", 0}, {"0", 1}}));
  CHECK(c.report["total_dim"] == 2);
  RunOptions punct = verb("curve");
  punct.punctures = 3;
  CHECK(run_fixture("tate_curve", punct).report["punctured"]["total_dim"] == 4);
}

TEST_CASE("fiber, subdivide, spec and check-fan verbs") {
  RunOptions fb = verb("fiber");
  fb.star = Vec{1, 1};
  const RunResult f = run_fixture("diagonal_point", fb);
  CHECK(f.exit_code == 0);
  CHECK(f.report["points"].size() == 1);

  RunOptions sd = verb("subdivide");
  sd.star = Vec{1, 1};
  const RunResult s = run_fixture("resolve_cone", sd);
  CHECK(s.exit_code == 0);
  CHECK(s.report["max_multiplicity"] == 1);

  RunOptions sp = verb("spec");
  sp.entity = "square";
  const RunResult p = run_fixture("library", sp);
  CHECK(p.exit_code == 0);
  CHECK(p.report["points"].size() == 10);
  CHECK(p.dot.find("digraph") == 0);
  CHECK(p.dot.find("->") != std::string::npos);

  RunOptions cf = verb("check-fan");
  cf.entity = "asfan2";
  const RunResult k = run_fixture("two_chart_gluing", cf);
  CHECK(k.report.contains("is_fan"));
  cf.entity = "p1";
  CHECK(run_fixture("library", cf).report["kato_points"] == 3);
}

TEST_CASE("exit codes") {
  CHECK(run_document("{", verb("spec")).exit_code == 1);
  CHECK(run_fixture("library", verb("spec")).exit_code == 1);  // several monoids, none chosen
  CHECK(run_fixture("library", verb("frobnicate")).exit_code == 1);
  RunOptions out = verb("subdivide");
  out.star = Vec{-1, 0};
  const RunResult r = run_fixture("resolve_cone", out);
  CHECK(r.exit_code == 2);
  CHECK(r.report["error"]["kind"] == "VectorOutsideSupport");
  RunOptions tiny = verb("resolve");
  tiny.budget = 1;
  std::string deep = R"({"cones": {"c": {"ambient_rank": 2, "generators": [[1,0],[1,29]]}}})";
  CHECK(run_document(deep, tiny).exit_code == 2);
  RunOptions zero = verb("curve");
  zero.punctures = 0;
  CHECK(run_fixture("tate_curve", zero).exit_code == 1);
}

TEST_CASE("reports are deterministic") {
  for (const auto& v : kVerbs) {
    for (const auto& name : kFixtures) {
      RunOptions o = verb(v);
      if (v == "extract") {
        o.sigma = "sigma";
        o.tau = "tau";
      }
      const RunResult a = run_fixture(name, o);
      const RunResult b = run_fixture(name, o);
      CHECK(a.report.dump() == b.report.dump());
      CHECK(a.dot == b.dot);
    }
  }
}
