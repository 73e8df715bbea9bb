#pragma once

// Dual graphs of semistable curves and the numerical shadow of their log
// 1-motifs: cycle space, monodromy pairing, polarizations, the monodromy
// operator and filtration, and punctured H^1 bookkeeping.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "katofan/lattice.hpp"
#include "katofan/matrix.hpp"

namespace katofan {

struct DualGraph {
  struct Edge {
    std::size_t a = 0, b = 0;
    Int length = 1;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  std::vector<int> genus;  // one entry per vertex
  std::vector<Edge> edges;

  /// Throws InvalidInput on negative genus, length < 1 or a dangling end.
  static DualGraph make(std::vector<int> genus, std::vector<Edge> edges);

  std::size_t vertex_count() const { return genus.size(); }
  std::size_t components() const;
  bool connected() const { return components() <= 1; }
  /// V x E; the edge column has +1 at a and -1 at b, zero for loops.
  IntMatrix incidence() const;
  friend bool operator==(const DualGraph&, const DualGraph&) = default;
};

/// Integer basis of ker(incidence), as vectors in Z^edges.
std::vector<Vec> cycle_space(const DualGraph& g);
/// <c, c'> = sum over edges of length * c_e * c'_e, on the cycle basis.
IntMatrix monodromy_pairing(const DualGraph& g);

struct Log1Motif {
  int gamma_rank = 0;
  int torus_rank = 0;
  int abelian_dim = 0;
  IntMatrix pairing;
  std::map<int, int> graded_dims;  // weight -> dimension of gr^W
  std::vector<std::string> warnings;

  int total_dim() const;
  /// Rank equalities, symmetry of the pairing and the graded dimensions.
  bool consistent() const;
  friend bool operator==(const Log1Motif& a, const Log1Motif& b) {
    return a.gamma_rank == b.gamma_rank && a.torus_rank == b.torus_rank && a.abelian_dim == b.abelian_dim &&
           a.pairing == b.pairing && a.graded_dims == b.graded_dims;
  }
};

Log1Motif log_jacobian_motif(const DualGraph& g);

struct PolarizationReport {
  bool attested_abelian = true;  // condition on the abelian part, taken as input
  bool attested_torus = true;    // condition on the torus part, taken as input
  bool invertible = false;       // p is an isomorphism over Q
  bool symmetric = false;
  bool positive_definite = false;
  std::vector<Int> leading_minors;
  bool ok() const { return attested_abelian && attested_torus && invertible && symmetric && positive_definite; }
};

/// Form (a, b) -> <p(a), b> built from the monodromy pairing.
PolarizationReport polarization_check(const Log1Motif& m, const IntMatrix& p, bool attested_abelian = true,
                                      bool attested_torus = true);

/// Increasing filtration: levels[k] = W_k for k in [low, high]; below low it
/// is zero and from high on it is everything.
struct Filtration {
  int low = 0;
  std::vector<Subspace> levels;
  int high() const { return low + static_cast<int>(levels.size()) - 1; }
  Subspace at(int k, std::size_t dim) const;
};

struct FilteredNilpotentOperator {
  RatMatrix n;
  Filtration weight;
  int center = 0;
  std::size_t dim() const { return n.rows(); }
};

/// Basis ordered gr_{-2}, gr_{-1}, gr_0; N maps gr_0 to gr_{-2} by the pairing.
FilteredNilpotentOperator monodromy_operator(const Log1Motif& m);

struct MonodromyComparison {
  Filtration monodromy;
  bool matches = false;
  std::optional<int> witness_weight;  // first weight where M and W differ
};

/// Deligne's monodromy filtration of N centered at F.center, compared with
/// F.weight. Throws NotNilpotent.
MonodromyComparison monodromy_filtration(const FilteredNilpotentOperator& f);

struct PuncturedH1 {
  Log1Motif closed;  // H^1 of the compact curve
  int puncture_rank = 0;  // rank of ker(sum : Z^n -> Z)
  std::string extension_class;  // opaque: not computed
  int total_dim() const { return closed.total_dim() + puncture_rank; }
};

/// Throws InvalidPunctureCount when punctures < 1.
PuncturedH1 punctured_h1(const DualGraph& g, int punctures);

}  // namespace katofan
