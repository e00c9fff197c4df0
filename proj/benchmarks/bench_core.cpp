#include <benchmark/benchmark.h>

#include "lamg/generators.hpp"
#include "lamg/matrix_market.hpp"
#include "lamg/rng.hpp"
#include "lamg/smoothing.hpp"
#include "lamg/solver.hpp"

using namespace lamg;

namespace {

Vector random_x(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Vector x(static_cast<std::size_t>(n));
  for (Real& v : x) v = rng.next_pm1();
  return x;
}

void BM_Mvm(benchmark::State& state) {
  SparseLaplacian a = gen::grid_5pt(static_cast<Index>(state.range(0)));
  Vector x = random_x(a.n, 1);
  Vector y(x.size());
  for (auto _ : state) {
    mvm(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * a.m);
}
BENCHMARK(BM_Mvm)->Arg(64)->Arg(256);

void BM_GaussSeidelSweep(benchmark::State& state) {
  SparseLaplacian a = gen::grid_5pt(static_cast<Index>(state.range(0)));
  Vector b(a.n, 0.0);
  Vector x = random_x(a.n, 2);
  for (auto _ : state) {
    gauss_seidel_sweep(a, b, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * a.m);
}
BENCHMARK(BM_GaussSeidelSweep)->Arg(64)->Arg(256);

void BM_Setup(benchmark::State& state) {
  SparseLaplacian a = gen::grid_5pt(static_cast<Index>(state.range(0)));
  for (auto _ : state) {
    Hierarchy h = setup(a);
    benchmark::DoNotOptimize(h.levels.size());
  }
  state.SetItemsProcessed(state.iterations() * a.m);
}
BENCHMARK(BM_Setup)->Unit(benchmark::kMillisecond)->Arg(64)->Arg(128)->Arg(256);

void BM_SolveGrid(benchmark::State& state) {
  SparseLaplacian a = gen::grid_5pt(static_cast<Index>(state.range(0)));
  Hierarchy h = setup(a);
  Vector b = make_rhs(a.n, parse_rhs_spec("random:5"));
  Vector x0 = random_x(a.n, 6);
  for (auto _ : state) {
    auto [x, stats] = solve(h, b, x0);
    benchmark::DoNotOptimize(stats.acf);
  }
  state.SetItemsProcessed(state.iterations() * a.m);
}
BENCHMARK(BM_SolveGrid)->Unit(benchmark::kMillisecond)->Arg(64)->Arg(128)->Arg(256);

} // namespace

BENCHMARK_MAIN();
