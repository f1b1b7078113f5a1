// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "thinobs/diagnostics.hpp"
#include "thinobs/gapscan.hpp"
#include "thinobs/presets.hpp"

using namespace thinobs;

namespace {

GridSolution start(int m) {
  SolveOptions o;
  o.h = 1.0 / m;
  o.max_sweeps = 1;
  o.nested = false;
  return solve(boundary_preset("he"), o);
}

void BM_SweepLexicographic(benchmark::State& state) {
  GridSolution s = start(static_cast<int>(state.range(0)));
  const double omega = default_omega(s.h());
  for (auto _ : state) kernels::sweep_lexicographic(s, omega);
  state.SetItemsProcessed(state.iterations() * s.u.size());
}

void BM_SweepRedBlack(benchmark::State& state) {
  GridSolution s = start(static_cast<int>(state.range(0)));
  const double omega = default_omega(s.h());
  for (auto _ : state) kernels::sweep_red_black(s, omega);
  state.SetItemsProcessed(state.iterations() * s.u.size());
}

void BM_BallDirichletSerial(benchmark::State& state) {
  const GridSolution s = from_function(boundary_preset("he"), 1.0 / state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ball_dirichlet_serial(s, 0.0, 0.5));
}

void BM_BallDirichletParallel(benchmark::State& state) {
  const GridSolution s = from_function(boundary_preset("he"), 1.0 / state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ball_dirichlet(s, 0.0, 0.5));
}

void BM_GapScan(benchmark::State& state) {
  const bool sequential = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_2d(0.5, 4.0, 1e-4, sequential));
}

}  // namespace

BENCHMARK(BM_SweepLexicographic)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_SweepRedBlack)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_BallDirichletSerial)->Arg(128)->Arg(256);
BENCHMARK(BM_BallDirichletParallel)->Arg(128)->Arg(256);
BENCHMARK(BM_GapScan)->Arg(1)->Arg(0);

int main(int argc, char** argv) {
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
