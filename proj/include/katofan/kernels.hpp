#pragma once

// Data-parallel hot loops. Each kernel has a serial reference and an OpenMP
// version selected by `Exec`; both return identical results (reductions are
// deterministic: first witness by index, entries written to fixed slots).

#include <functional>
#include <optional>
#include <vector>

#include "katofan/cone.hpp"
#include "katofan/matrix.hpp"

namespace katofan::kernels {

enum class Exec { serial, parallel };

/// Default used by library code: parallel when built with OpenMP.
Exec default_exec();

/// G(i, j) = Tr(a_i a_j).
RatMatrix trace_gram(const std::vector<RatMatrix>& basis, Exec exec = default_exec());

/// mask[i] is true iff candidates[i] is not candidates[i] - y + y for another
/// candidate y with candidates[i] - y in the cone.
std::vector<char> irreducible_mask(const std::vector<Vec>& candidates, const RationalCone& cone,
                                   Exec exec = default_exec());

/// First point of the box [-bound, bound]^n (in lexicographic order) for which
/// `violates` holds. The predicate must be safe to call concurrently.
std::optional<Vec> box_scan(int n, Int bound, const std::function<bool(const Vec&)>& violates,
                            Exec exec = default_exec());

}  // namespace katofan::kernels
