#pragma once

// Exact integer and rational linear algebra: Hermite forms with unimodular
// transforms, integer kernels, lattice quotients, Smith invariants, and
// rational subspaces.

#include <optional>
#include <vector>

#include "katofan/matrix.hpp"

namespace katofan {

// ---- integer lattices ----------------------------------------------------

struct HermiteResult {
  IntMatrix form;       // U * A, row echelon with positive pivots, entries above pivots reduced
  IntMatrix transform;  // U, unimodular
  std::vector<std::size_t> pivot_columns;
  std::size_t rank() const { return pivot_columns.size(); }
};

/// Row-style Hermite normal form of `a`.
HermiteResult hermite_rows(const IntMatrix& a);

/// Inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& u);

Int determinant(const IntMatrix& a);
std::size_t rank(const IntMatrix& a);
std::size_t rank_of(const std::vector<Vec>& vectors, int ambient);

/// Saturated basis of {x in Z^cols : a x = 0}.
std::vector<Vec> integer_kernel(const IntMatrix& a);

/// Hermite basis of the lattice generated by `gens` in Z^ambient.
std::vector<Vec> lattice_basis(const std::vector<Vec>& gens, int ambient);

/// Integer coordinates of x with respect to an independent lattice basis, if x lies in the lattice.
std::optional<Vec> lattice_coordinates(const std::vector<Vec>& basis, const Vec& x);

/// Projection Z^n -> Z^(n-r) whose kernel is span(vectors) ∩ Z^n, with an integral section.
struct LatticeQuotient {
  IntMatrix projection;         // (n-r) x n, surjective
  IntMatrix section;            // n x (n-r), projection * section = I
  std::vector<Vec> kernel_basis;  // basis of span(vectors) ∩ Z^n
};
LatticeQuotient quotient_by_span(const std::vector<Vec>& vectors, int ambient);

/// Basis of span(vectors) ∩ Z^ambient.
std::vector<Vec> saturated_span_basis(const std::vector<Vec>& vectors, int ambient);

/// Diagonal of the Smith normal form (nonzero invariants only).
std::vector<Int> smith_invariants(const IntMatrix& a);

// ---- rational linear algebra ---------------------------------------------

struct RowEchelon {
  RatMatrix form;  // reduced row echelon form
  std::vector<std::size_t> pivot_columns;
};
RowEchelon rref(const RatMatrix& a);
std::size_t rank(const RatMatrix& a);
Rational determinant(const RatMatrix& a);
std::vector<RatVec> kernel(const RatMatrix& a);
std::optional<RatVec> solve(const RatMatrix& a, const RatVec& b);
std::optional<RatMatrix> inverse(const RatMatrix& a);

/// Subspace of Q^n held as a reduced row-echelon basis.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}
  Subspace(std::size_t ambient, const std::vector<RatVec>& spanning);

  static Subspace whole(std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<RatVec>& basis() const { return basis_; }

  bool contains(const RatVec& v) const;
  bool contains(const Subspace& other) const;
  Subspace operator+(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  /// Image under a linear map given as a matrix acting on column vectors.
  Subspace image(const RatMatrix& map) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_;
  std::vector<RatVec> basis_;
};

/// Kernel and image of a square matrix as subspaces.
Subspace kernel_space(const RatMatrix& a);
Subspace image_space(const RatMatrix& a);

}  // namespace katofan
