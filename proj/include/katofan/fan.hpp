#pragma once

// Fans as finite monoidal spaces, rational polyhedral fans, morphisms and
// strictness, and the gluing of associated fans from chart data.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "katofan/cone.hpp"
#include "katofan/matrix.hpp"
#include "katofan/monoid.hpp"

namespace katofan {

/// A monoid map between stalks, acting on group coordinates:
/// rank(target) x rank(source).
using MonoidMap = IntMatrix;

/// Sharp fs stalk held in group coordinates: gp = Z^rank, generators are the
/// Hilbert basis. Labels name the generators (optional, for reports).
struct Stalk {
  int rank = 0;
  std::vector<Vec> generators;
  std::vector<std::string> labels;

  /// Normalizes to the Hilbert basis; throws NotSharp / InvalidInput when the
  /// generators do not describe a sharp monoid with group Z^rank.
  static Stalk make(int rank, const std::vector<Vec>& generators, std::vector<std::string> labels = {});
  AffineMonoid monoid() const { return AffineMonoid(rank, generators, true); }
  bool contains(const Vec& x) const;
  /// Label of generator i, or its coordinates when unlabeled.
  std::string label(std::size_t i) const;
  friend bool operator==(const Stalk&, const Stalk&) = default;
};

/// Finite Alexandrov space with sharp stalks. Generization edges carry the
/// map from the stalk of the special point to the stalk of the generic one;
/// the transitive closure is computed and checked for functoriality.
class MonoidalSpace {
 public:
  struct Point {
    std::string name;
    Stalk stalk;
    bool designated = false;
    friend bool operator==(const Point&, const Point&) = default;
  };
  struct Edge {
    std::size_t special = 0;
    std::size_t generic = 0;
    MonoidMap map;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  MonoidalSpace() = default;
  MonoidalSpace(std::vector<Point> points, std::vector<Edge> edges);

  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  const Stalk& stalk(std::size_t i) const { return points_[i].stalk; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  /// Reflexive: every point generizes itself.
  bool generizes(std::size_t generic, std::size_t special) const;
  /// Map stalk(special) -> stalk(generic); identity when equal.
  const MonoidMap& map(std::size_t special, std::size_t generic) const;
  /// Minimal open neighborhood: the generizations of t (including t), sorted.
  std::vector<std::size_t> neighborhood(std::size_t t) const;

  friend bool operator==(const MonoidalSpace& a, const MonoidalSpace& b) {
    return a.points_ == b.points_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Point> points_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::optional<MonoidMap>>> closure_;  // [special][generic]
};

/// True iff phi : P -> Q is a localization at a face followed by sharpening.
bool is_localization_map(const Stalk& p, const Stalk& q, const MonoidMap& phi);

/// Identification of the neighborhood of a point with Spec of its stalk.
struct Chart {
  std::size_t point = 0;
  std::vector<std::size_t> neighborhood;
  std::vector<std::vector<std::size_t>> faces;  // kernel face (HB indices) of each neighborhood point
};

struct FanCheck {
  bool ok = false;
  std::vector<Chart> charts;
  std::optional<std::size_t> failing_point;
  std::string reason;
};
FanCheck is_fan(const MonoidalSpace& x);

struct KatoFan {
  MonoidalSpace space;
  std::vector<Chart> charts;
};

/// Localization of a stalk at the face spanned by the given Hilbert-basis
/// indices, sharpened. Returns the stalk and the quotient map.
struct LocalStalk {
  Stalk stalk;
  IntMatrix projection;  // stalk(parent) gp -> stalk gp
  IntMatrix section;     // integral section of the projection
};
LocalStalk localize_at_face(const Stalk& p, const std::vector<std::size_t>& face);

/// Spec of a sharp fs monoid as a Kato fan; points are named by their kernel
/// faces, e.g. "face(0,1)".
KatoFan spec_to_space(const AffineMonoid& m);
KatoFan spec_to_space(const Stalk& s);

// ---- rational fans ---------------------------------------------------------

struct RationalFan {
  int ambient_rank = 0;
  std::vector<RationalCone> cones;  // canonical order, no duplicates

  /// Sorts and removes duplicates.
  static RationalFan from_cones(int ambient_rank, std::vector<RationalCone> cones);
  /// All faces of the given cones.
  static RationalFan generated_by(int ambient_rank, const std::vector<RationalCone>& maximal);

  std::vector<Vec> rays() const;
  std::vector<std::size_t> maximal_cones() const;
  std::optional<std::size_t> index_of(const RationalCone& c) const;
  bool in_support(const Vec& v) const;
  friend bool operator==(const RationalFan&, const RationalFan&) = default;
};

/// "cone((1,0),(0,1))"; the zero cone is "cone()".
std::string describe_cone(const RationalCone& c);

struct FanReport {
  bool valid = true;
  std::string violation;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
};
FanReport validate_rational_fan(const RationalFan& f);

/// Points are cones in fan order; tau generizes sigma iff tau is a face of
/// sigma; stalks are the sharp duals.
KatoFan rational_to_kato(const RationalFan& f);

// ---- morphisms -------------------------------------------------------------

struct FanMorphism {
  std::shared_ptr<const MonoidalSpace> source;
  std::shared_ptr<const MonoidalSpace> target;
  std::vector<std::size_t> point_map;
  std::vector<MonoidMap> stalk_maps;  // stalk(f(x)) -> stalk(x)
};

/// Throws InvalidInput when continuity, monoid maps or compatibility fail.
void validate_morphism(const FanMorphism& f);
bool is_strict(const FanMorphism& f);
FanMorphism identity_morphism(std::shared_ptr<const MonoidalSpace> x);
/// g after f.
FanMorphism compose(const FanMorphism& g, const FanMorphism& f);
/// True when the stalk map is an isomorphism of sharp monoids.
bool is_stalk_isomorphism(const Stalk& from, const Stalk& to, const MonoidMap& m);

/// Spec of a monoid map phi : P -> Q (sharp fs, group coordinates):
/// the morphism Spec(Q) -> Spec(P).
FanMorphism spec_morphism(const Stalk& p, const Stalk& q, const MonoidMap& phi);
/// The induced map on global sections P -> Q of a morphism Spec(Q) -> Spec(P).
MonoidMap global_sections(const FanMorphism& f);

// ---- associated fans -------------------------------------------------------

enum class AssocMode { log_regular, over_standard_log_point };

struct Obstruction {
  std::string chart;
  std::string first;   // prime descriptions, e.g. "prime(x3)"
  std::string second;
  std::string message;
};

struct AssociatedFan {
  std::optional<KatoFan> fan;
  std::optional<FanMorphism> morphism;
  std::optional<Obstruction> obstruction;
  bool ok() const { return !obstruction.has_value(); }
};

/// Glues Spec of the designated points' stalks along the identifications
/// forced by the points they generize to.
AssociatedFan build_associated_fan(const MonoidalSpace& x, AssocMode mode);

/// "prime(x3)" / "prime(x1,x2)" / "prime()" from a complement face.
std::string describe_prime(const Stalk& s, const std::vector<std::size_t>& complement_face);

}  // namespace katofan
