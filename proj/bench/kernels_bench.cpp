// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "katofan/algebra.hpp"
#include "katofan/kernels.hpp"

using namespace katofan;
using kernels::Exec;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

// Upper triangular n x n matrices: dimension n(n+1)/2.
std::vector<RatMatrix> upper_basis(std::size_t n) {
  std::vector<RatMatrix> b;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) b.push_back(elementary(n, i, j));
  return b;
}

void BM_TraceGram(benchmark::State& state) {
  const auto basis = upper_basis(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::trace_gram(basis, exec_of(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_IrreducibleMask(benchmark::State& state) {
  const Int k = state.range(1);
  const RationalCone cone(2, {{1, 0}, {1, k}});
  std::vector<Vec> candidates;
  for (Int x = 1; x <= k; ++x)
    for (Int y = 0; y <= k * x; ++y) candidates.push_back({x, y});
  for (auto _ : state) benchmark::DoNotOptimize(kernels::irreducible_mask(candidates, cone, exec_of(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_BoxScan(benchmark::State& state) {
  const Int bound = state.range(1);
  const RationalCone cone(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 5}});
  // No violation: every point is visited.
  auto never = [&](const Vec& v) { return cone.contains(v) && v[2] > 1000; };
  for (auto _ : state) benchmark::DoNotOptimize(kernels::box_scan(3, bound, never, exec_of(state)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_TraceGram)->ArgsProduct({{0, 1}, {4, 6, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IrreducibleMask)->ArgsProduct({{0, 1}, {6, 10}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoxScan)->ArgsProduct({{0, 1}, {6, 12}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
