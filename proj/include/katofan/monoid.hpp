#pragma once

// Finitely generated commutative monoids inside Z^d: saturation,
// groupification, units and sharpening, localization, ideals and the prime
// spectrum.

#include <optional>
#include <utility>
#include <vector>

#include "katofan/cone.hpp"
#include "katofan/matrix.hpp"

namespace katofan {

/// Submonoid of Z^d generated by finitely many vectors. An empty generator
/// list is the trivial monoid {0}.
class AffineMonoid {
 public:
  AffineMonoid() = default;
  AffineMonoid(int ambient_rank, std::vector<Vec> generators, bool saturated = false);

  int ambient_rank() const { return ambient_rank_; }
  const std::vector<Vec>& generators() const { return generators_; }
  /// True when the monoid is known to be saturated (set by saturate()).
  bool saturated_flag() const { return saturated_; }
  /// Minimal generators, cached when the monoid came out of saturate().
  const std::optional<std::vector<Vec>>& hilbert_basis() const { return hilbert_basis_; }

  friend bool operator==(const AffineMonoid& a, const AffineMonoid& b) {
    return a.ambient_rank_ == b.ambient_rank_ && a.generators_ == b.generators_;
  }

 private:
  friend AffineMonoid saturate(const AffineMonoid& m);
  int ambient_rank_ = 0;
  std::vector<Vec> generators_;
  bool saturated_ = false;
  std::optional<std::vector<Vec>> hilbert_basis_;
};

struct Lattice {
  int ambient_rank = 0;
  std::vector<Vec> basis;  // Hermite basis
  int rank() const { return static_cast<int>(basis.size()); }
};

/// Minimal generating set of cone(generators) ∩ L, where L is the lattice with
/// the given basis and contains the generators. Sorted.
std::vector<Vec> hilbert_basis(const std::vector<Vec>& generators, const std::vector<Vec>& lattice_basis, int ambient);

Lattice groupify(const AffineMonoid& m);
RationalCone real_cone(const AffineMonoid& m);

AffineMonoid saturate(const AffineMonoid& m);
bool is_saturated(const AffineMonoid& m);

/// Exact membership test.
bool contains(const AffineMonoid& m, const Vec& x);
/// Equality as subsets of Z^d, by mutual membership of generators.
bool same_monoid(const AffineMonoid& a, const AffineMonoid& b);

struct SharpQuotient {
  Lattice group;                 // gp(M)
  std::vector<Vec> unit_basis;   // basis of M^x in Z^d
  AffineMonoid sharp;            // M / M^x inside Z^(rank gp - rank units)
  IntMatrix projection;          // acts on gp(M) coordinates
};
SharpQuotient units_and_sharpen(const AffineMonoid& m);
/// Image of x in gp(M) under the sharpening map.
Vec sharp_image(const SharpQuotient& q, const Vec& x);
bool is_sharp(const AffineMonoid& m);

AffineMonoid localize(const AffineMonoid& m, const Vec& f);

struct MonoidIdeal {
  AffineMonoid parent;
  std::vector<Vec> generators;
};

struct PrimeIdeal {
  std::vector<std::size_t> complement_face;  // indices into the Hilbert basis
  friend bool operator==(const PrimeIdeal&, const PrimeIdeal&) = default;
};

struct MonoidSpectrum {
  AffineMonoid monoid;              // the sharpened saturation the primes refer to
  std::vector<Vec> hilbert_basis;
  std::vector<PrimeIdeal> primes;   // by height, then complement indices
  std::vector<int> heights;
  /// (a, b): prime a is contained in prime b, so a generizes b.
  std::vector<std::pair<std::size_t, std::size_t>> generizations;
};

/// Primes of M, encoded by complementary faces. Primes of an affine monoid
/// correspond to faces of its cone, so they are reported on the Hilbert basis
/// of the sharpened saturation.
MonoidSpectrum spec(const AffineMonoid& m);

/// Decided on Hilbert-basis elements. Throws NotAnIdeal when a generator is
/// not in the parent.
bool is_prime(const MonoidIdeal& ideal);

/// Members of the ideal among the given elements of the parent.
bool ideal_contains(const MonoidIdeal& ideal, const Vec& x);

/// Integral saturated pushout of two maps out of a common monoid, then
/// sharpened. The maps are integer matrices acting on group coordinates:
/// f : Z^a -> Z^b and g : Z^a -> Z^c, with P, Q, R given by generators in
/// those coordinates. Result lives in Z^k with the two induced maps.
struct Pushout {
  std::vector<Vec> generators;  // Hilbert basis of the sharp result
  int rank = 0;
  IntMatrix from_left;   // k x b
  IntMatrix from_right;  // k x c
};
Pushout fs_pushout(const IntMatrix& f, const std::vector<Vec>& left_generators, const IntMatrix& g,
                   const std::vector<Vec>& right_generators);

}  // namespace katofan
