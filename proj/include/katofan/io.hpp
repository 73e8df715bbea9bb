#pragma once

// Workspace documents: JSON parsing with full validation, canonical
// serialization, verb dispatch producing JSON reports, and DOT renderings
// of finite monoidal spaces.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "katofan/algebra.hpp"
#include "katofan/curve.hpp"
#include "katofan/fan.hpp"
#include "katofan/monoid.hpp"

namespace katofan {

inline constexpr int kSchemaVersion = 1;

/// A morphism from a declared space to the Kato fan of a declared rational
/// fan, by point names and stalk maps.
struct MorphismSpec {
  struct Assignment {
    std::string point;
    std::string image;  // a cone name as produced by describe_cone
    MonoidMap map;
    friend bool operator==(const Assignment&, const Assignment&) = default;
  };
  std::string source;
  std::string fan;
  std::vector<Assignment> assignments;
  friend bool operator==(const MorphismSpec&, const MorphismSpec&) = default;
};

struct Workspace {
  std::map<std::string, AffineMonoid> monoids;
  std::map<std::string, RationalCone> cones;
  std::map<std::string, RationalFan> fans;
  std::map<std::string, MonoidalSpace> spaces;
  std::map<std::string, MorphismSpec> morphisms;
  std::map<std::string, MatrixAlgebra> algebras;
  std::map<std::string, DualGraph> graphs;
  friend bool operator==(const Workspace&, const Workspace&) = default;
};

/// Throws ParseError (with a JSON path) or InvariantViolation (naming the
/// entity).
Workspace parse(std::string_view document);
Workspace from_json(const nlohmann::json& j);
nlohmann::json to_json(const Workspace& w);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize(const Workspace& w);

/// Resolves names against the workspace and validates the morphism.
FanMorphism resolve_morphism(const Workspace& w, const MorphismSpec& m);

/// Hasse diagram of the generization order, special -> generic.
std::string to_dot(const MonoidalSpace& x, const std::string& graph_name = "space");

struct RunOptions {
  std::string verb;
  std::optional<std::string> entity;
  std::optional<std::string> sigma;
  std::optional<std::string> tau;
  std::optional<Vec> star;
  int budget = 10000;
  int punctures = 1;
  AssocMode mode = AssocMode::log_regular;
};

struct RunResult {
  nlohmann::json report;
  int exit_code = 0;  // 0 success, 1 input error, 2 mathematical failure
  std::string dot;    // empty when the verb has nothing to draw
};

inline const std::vector<std::string> kVerbs{"spec",    "resolve", "subdivide", "extract",   "strictify",
                                              "fiber",   "radical", "curve",     "check-fan", "assoc-fan"};

/// Never throws for library errors; they become report entries.
RunResult run(const Workspace& w, const RunOptions& options);
/// Parses and runs; parse failures give exit code 1.
RunResult run_document(std::string_view document, const RunOptions& options);

}  // namespace katofan
