// Microbenchmarks for the hot paths: invariant evaluation, the local
// return mapping, and a full strain-driven path run.

#include <benchmark/benchmark.h>

#include "ssdam/drivers.hpp"
#include "ssdam/integrator.hpp"
#include "ssdam/material.hpp"
#include "ssdam/sym_tensor.hpp"

namespace {

using namespace ssdam;

void BM_StressState(benchmark::State& state) {
  const SymTensor sigma = {320.0, 45.0, -12.0, 60.0, 8.0, -21.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(stress_state(sigma));
  }
}
BENCHMARK(BM_StressState);

void BM_LodeGradient(benchmark::State& state) {
  const SymTensor sigma = {320.0, 45.0, -12.0, 60.0, 8.0, -21.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dtheta0_dsigma(sigma));
  }
}
BENCHMARK(BM_LodeGradient);

void BM_ReturnMap(benchmark::State& state) {
  const MaterialParams p = MaterialParams::aa2024();
  // A state just past yield so every iteration exercises the plastic branch.
  MaterialState s;
  s.eps_e = SymTensor::diag(5.0e-3, -1.5e-3, -1.5e-3);
  SymTensor deps = SymTensor::diag(1.0e-3, -3.0e-4, -3.0e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(return_map(s, deps, p));
  }
}
BENCHMARK(BM_ReturnMap);

void BM_UniaxialPath(benchmark::State& state) {
  const MaterialParams p = MaterialParams::aa2024();
  const PathSpec path =
      PathSpec::uniaxial_tension(0.05, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_path(p, path));
  }
}
BENCHMARK(BM_UniaxialPath)->Arg(100)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
