#pragma once

// Finite-dimensional algebras of rational matrices: closure under products,
// trace pairings and their kernels, the trace-form radical with ideal and
// nilpotency certificates, and the semisimple quotient.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "katofan/kernels.hpp"
#include "katofan/lattice.hpp"
#include "katofan/matrix.hpp"

namespace katofan {

Rational trace(const RatMatrix& a);
/// Coordinates of a matrix in row-major order.
RatVec flatten(const RatMatrix& a);

/// Span of linearly independent dim_v x dim_v matrices closed under product.
/// Non-unital algebras are allowed.
class MatrixAlgebra {
 public:
  MatrixAlgebra() = default;
  /// Validates independence, closure and the declared unit; throws
  /// InvalidInput or DimensionMismatch.
  static MatrixAlgebra make(std::size_t dim_v, std::vector<RatMatrix> basis, std::optional<RatMatrix> unit = std::nullopt,
                            std::vector<int> weights = {});

  std::size_t dim_v() const { return dim_v_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<RatMatrix>& basis() const { return basis_; }
  const std::optional<RatMatrix>& unit() const { return unit_; }
  const std::vector<int>& weights() const { return weights_; }
  /// structure(i, j) = coordinates of basis[i] * basis[j].
  const RatVec& structure(std::size_t i, std::size_t j) const { return structure_[i * basis_.size() + j]; }

  std::optional<RatVec> coordinates(const RatMatrix& m) const;
  RatMatrix element(const RatVec& coords) const;

  friend bool operator==(const MatrixAlgebra& a, const MatrixAlgebra& b) {
    return a.dim_v_ == b.dim_v_ && a.basis_ == b.basis_ && a.unit_ == b.unit_ && a.weights_ == b.weights_;
  }

 private:
  std::size_t dim_v_ = 0;
  std::vector<RatMatrix> basis_;
  std::optional<RatMatrix> unit_;
  std::vector<int> weights_;
  std::vector<RatVec> structure_;
  RatMatrix span_;  // columns are the flattened basis
};

/// Span closure of the generators (and the identity when unital).
MatrixAlgebra close_algebra(const std::vector<RatMatrix>& generators, bool unital);

struct RadicalResult {
  std::vector<RatVec> coordinates;  // basis of I0 in algebra coordinates
  std::vector<RatMatrix> basis;     // the same elements as matrices
  RatMatrix gram;
  bool two_sided_ideal = true;
  bool nilpotent = true;
  std::size_t nilpotency_checks = 0;
};

inline constexpr std::uint64_t kDefaultRadicalSeed = 20240917;
inline constexpr int kRandomNilpotencyChecks = 20;

/// Kernel of the trace Gram matrix, certified as a two-sided ideal of
/// nilpotent elements (basis plus seeded random combinations).
RadicalResult trace_radical(const MatrixAlgebra& a, std::uint64_t seed = kDefaultRadicalSeed,
                            kernels::Exec exec = kernels::default_exec());

struct PairingData {
  std::vector<RatMatrix> a_basis;
  std::vector<RatMatrix> b_basis;
  RatMatrix pairing;  // (a_i, b_j)

  /// pairing(i, j) = Tr(a_i b_j).
  static PairingData from_trace(std::vector<RatMatrix> a, std::vector<RatMatrix> b);
  /// True when the values agree with the trace of products.
  bool matches_trace() const;
};

struct PairingKernel {
  std::vector<RatVec> kernel;  // left kernel in A-coordinates
  std::size_t quotient_dim = 0;
};
PairingKernel pairing_kernel(const PairingData& d);

struct SemisimplicityCertificate {
  bool semisimple = false;
  std::optional<Rational> gram_determinant;  // when semisimple
  std::optional<RatMatrix> witness;          // a radical element otherwise
};
SemisimplicityCertificate certify_semisimple(const MatrixAlgebra& a);

struct QuotientResult {
  MatrixAlgebra algebra;              // A / I0 in its regular representation
  std::vector<std::size_t> lifts;     // basis indices of A lifting the quotient basis
  std::size_t radical_dim = 0;
  SemisimplicityCertificate certificate;
  bool traces_rational = true;
};
QuotientResult num_equiv_quotient(const MatrixAlgebra& a);

/// Algebras whose Jacobson radical is known by construction.
struct AlgebraFixture {
  std::string name;
  MatrixAlgebra algebra;
  std::vector<RatMatrix> radical;  // spanning set of J
};
std::vector<AlgebraFixture> algebra_fixtures();

/// Matrix unit E_ij (0-based) of size n.
RatMatrix elementary(std::size_t n, std::size_t i, std::size_t j);

}  // namespace katofan
