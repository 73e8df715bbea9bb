#include "katofan/curve.hpp"

#include <numeric>

#include "katofan/errors.hpp"

namespace katofan {

DualGraph DualGraph::make(std::vector<int> genus, std::vector<Edge> edges) {
  for (int g : genus)
    if (g < 0) throw InvalidInput("negative genus");
  for (const auto& e : edges) {
    if (e.length < 1) throw InvalidInput("edge length must be at least 1");
    if (e.a >= genus.size() || e.b >= genus.size()) throw InvalidInput("edge end is not a vertex");
  }
  return DualGraph{std::move(genus), std::move(edges)};
}

std::size_t DualGraph::components() const {
  std::vector<std::size_t> parent(genus.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t count = genus.size();
  for (const auto& e : edges) {
    const std::size_t ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      --count;
    }
  }
  return count;
}

IntMatrix DualGraph::incidence() const {
  IntMatrix m(genus.size(), edges.size());
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (edges[j].a == edges[j].b) continue;
    m(edges[j].a, j) = 1;
    m(edges[j].b, j) = -1;
  }
  return m;
}

std::vector<Vec> cycle_space(const DualGraph& g) {
  if (g.edges.empty()) return {};
  return integer_kernel(g.incidence());
}

IntMatrix monodromy_pairing(const DualGraph& g) {
  const std::vector<Vec> cycles = cycle_space(g);
  const std::size_t r = cycles.size();
  IntMatrix p(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      Int s = 0;
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        s = checked_add(s, checked_mul(g.edges[e].length, checked_mul(cycles[i][e], cycles[j][e])));
      p(i, j) = p(j, i) = s;
    }
  return p;
}

int Log1Motif::total_dim() const {
  int t = 0;
  for (const auto& [w, d] : graded_dims) t += d;
  return t;
}

bool Log1Motif::consistent() const {
  if (gamma_rank != torus_rank || gamma_rank < 0 || abelian_dim < 0) return false;
  const auto n = static_cast<std::size_t>(gamma_rank);
  if (pairing.rows() != n || pairing.cols() != n || pairing != pairing.transpose()) return false;
  const std::map<int, int> expected{{-2, torus_rank}, {-1, 2 * abelian_dim}, {0, gamma_rank}};
  return graded_dims == expected;
}

Log1Motif log_jacobian_motif(const DualGraph& g) {
  Log1Motif m;
  m.pairing = monodromy_pairing(g);
  m.gamma_rank = m.torus_rank = static_cast<int>(m.pairing.rows());
  m.abelian_dim = std::accumulate(g.genus.begin(), g.genus.end(), 0);
  m.graded_dims = {{-2, m.torus_rank}, {-1, 2 * m.abelian_dim}, {0, m.gamma_rank}};
  if (!g.connected()) m.warnings.push_back("dual graph has " + std::to_string(g.components()) + " components");
  return m;
}

PolarizationReport polarization_check(const Log1Motif& m, const IntMatrix& p, bool attested_abelian,
                                      bool attested_torus) {
  const auto n = static_cast<std::size_t>(m.gamma_rank);
  if (p.rows() != n || p.cols() != n) throw DimensionMismatch("polarization must be square of size rank Gamma");
  if (m.pairing.rows() != n || m.pairing.cols() != n) throw DimensionMismatch("pairing does not match rank Gamma");
  PolarizationReport r;
  r.attested_abelian = attested_abelian;
  r.attested_torus = attested_torus;
  r.invertible = n == 0 || determinant(p) != 0;
  const IntMatrix form = p.transpose() * m.pairing;
  r.symmetric = form == form.transpose();
  r.positive_definite = r.symmetric;
  for (std::size_t k = 1; k <= n; ++k) {
    const Int minor = determinant(form.row_block(0, k).column_block(0, k));
    r.leading_minors.push_back(minor);
    if (minor <= 0) r.positive_definite = false;
  }
  return r;
}

Subspace Filtration::at(int k, std::size_t dim) const {
  if (k < low) return Subspace(dim);
  if (k > high()) return Subspace::whole(dim);
  return levels[static_cast<std::size_t>(k - low)];
}

FilteredNilpotentOperator monodromy_operator(const Log1Motif& m) {
  if (!m.consistent()) throw InvalidInput("inconsistent log 1-motif");
  const auto t = static_cast<std::size_t>(m.torus_rank);
  const auto a = static_cast<std::size_t>(2 * m.abelian_dim);
  const std::size_t n = t + a + t;
  FilteredNilpotentOperator f;
  f.n = RatMatrix(n, n);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) f.n(i, t + a + j) = Rational(m.pairing(i, j));
  auto prefix = [n](std::size_t k) {
    std::vector<RatVec> vs;
    for (std::size_t i = 0; i < k; ++i) {
      RatVec v(n);
      v[i] = 1;
      vs.push_back(v);
    }
    return Subspace(n, vs);
  };
  f.weight.low = -2;
  f.weight.levels = {prefix(t), prefix(t + a), Subspace::whole(n)};
  f.center = -1;
  return f;
}

namespace {

RatMatrix power(const RatMatrix& n, std::size_t e) {
  RatMatrix r = RatMatrix::identity(n.rows());
  for (std::size_t i = 0; i < e; ++i) r = r * n;
  return r;
}

}  // namespace

MonodromyComparison monodromy_filtration(const FilteredNilpotentOperator& f) {
  const std::size_t d = f.n.rows();
  if (f.n.cols() != d) throw DimensionMismatch("monodromy operator must be square");
  for (const auto& s : f.weight.levels)
    if (s.ambient() != d) throw DimensionMismatch("weight filtration lives in the wrong space");
  if (!power(f.n, d).is_zero()) throw NotNilpotent("operator is not nilpotent");

  // powers[j] = N^j; L is the largest exponent with N^L != 0.
  std::vector<RatMatrix> powers{RatMatrix::identity(d)};
  while (!powers.back().is_zero()) powers.push_back(powers.back() * f.n);
  const int top = static_cast<int>(powers.size()) - 2;
  const int L = std::max(top, 0);
  auto ker = [&](int e) { return e >= static_cast<int>(powers.size()) ? Subspace::whole(d) : kernel_space(powers[e]); };
  auto img = [&](int e) { return e >= static_cast<int>(powers.size()) ? Subspace(d) : image_space(powers[e]); };

  MonodromyComparison out;
  out.monodromy.low = f.center - L;
  for (int k = -L; k <= L; ++k) {
    Subspace level(d);
    for (int j = std::max(0, -k); j <= L; ++j) {
      if (k + j + 1 <= 0) continue;
      level = level + ker(k + j + 1).intersect(img(j));
    }
    out.monodromy.levels.push_back(level);
  }

  const int lo = std::min(out.monodromy.low, f.weight.low) - 1;
  const int hi = std::max(out.monodromy.high(), f.weight.high()) + 1;
  out.matches = true;
  for (int k = lo; k <= hi; ++k)
    if (!(out.monodromy.at(k, d) == f.weight.at(k, d))) {
      out.matches = false;
      out.witness_weight = k;
      break;
    }
  return out;
}

PuncturedH1 punctured_h1(const DualGraph& g, int punctures) {
  if (punctures < 1) throw InvalidPunctureCount("at least one puncture is required");
  PuncturedH1 h;
  h.closed = log_jacobian_motif(g);
  h.puncture_rank = punctures - 1;
  h.extension_class = h.puncture_rank == 0 ? "none" : "psi: Gamma_punct -> J (not computed)";
  return h;
}

}  // namespace katofan
