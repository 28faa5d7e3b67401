#include <benchmark/benchmark.h>

#include <vector>

#include "biharm/analysis.hpp"
#include "biharm/mollifier.hpp"

using namespace biharm;

static void BM_ApplySystem(benchmark::State& state) {
  const GridSpec grid = build_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const LinearSystem sys(grid, BcScheme::CenteredMirror);
  std::vector<double> v(sys.unknowns(), 1.0), out(sys.unknowns());
  for (auto _ : state) {
    sys.apply(v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sys.unknowns()));
}
BENCHMARK(BM_ApplySystem)->Args({2, 32})->Args({2, 128})->Args({3, 16})->Args({3, 32});

static void BM_H2hNorm(benchmark::State& state) {
  const GridSpec grid = build_grid(2, static_cast<int>(state.range(0)));
  ProbeRng rng(3);
  const LatticeField v = random_field(grid, rng);
  for (auto _ : state) benchmark::DoNotOptimize(h2h_norm(v));
}
BENCHMARK(BM_H2hNorm)->Arg(32)->Arg(128);

static void BM_SmoothSource(benchmark::State& state) {
  const GridSpec grid = build_grid(2, static_cast<int>(state.range(0)));
  const ManufacturedCase c = manufactured_pair("sine4", 2);
  for (auto _ : state) {
    LatticeField f = smooth_source(c.f, grid);
    benchmark::DoNotOptimize(f.values().data());
  }
}
BENCHMARK(BM_SmoothSource)->Arg(16)->Arg(64);

static void BM_Solve(benchmark::State& state) {
  const GridSpec grid = build_grid(2, static_cast<int>(state.range(0)));
  const ManufacturedCase c = manufactured_pair("sine4", 2);
  const BcScheme scheme = state.range(1) ? BcScheme::OneSidedZero : BcScheme::CenteredMirror;
  int iters = 0;
  for (auto _ : state) {
    const SolveResult r = solve(c.f, grid, scheme);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.residual);
  }
  state.counters["cg_iters"] = iters;
}
BENCHMARK(BM_Solve)->Args({16, 0})->Args({32, 0})->Args({64, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
