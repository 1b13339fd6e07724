#include <benchmark/benchmark.h>

#include "choquard/choquard.hpp"

namespace {

using namespace choquard;

void BM_AssembleNewtonian(benchmark::State& state) {
  const ProblemParams pp(3, 2, 2);
  auto grid = make_grid(3, 30.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_kernel(grid, pp, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleNewtonian)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

// theta quadrature path
void BM_AssembleQuadrature(benchmark::State& state) {
  const ProblemParams pp(4, 1.5, 2);
  auto grid = make_grid(4, 20.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_kernel(grid, pp, 1));
}
BENCHMARK(BM_AssembleQuadrature)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_KernelApply(benchmark::State& state) {
  const ProblemParams pp(3, 2, 2);
  auto grid = make_grid(3, 30.0, static_cast<std::size_t>(state.range(0)));
  auto kernel = assemble_kernel(grid, pp);
  auto u = RadialProfile::sample(grid, [](double r) { return std::exp(-r); });
  for (auto _ : state) benchmark::DoNotOptimize(kernel.apply(u.values()));
}
BENCHMARK(BM_KernelApply)->Arg(1000)->Arg(3000);

void BM_SolveBvp(benchmark::State& state) {
  auto grid = make_grid(3, 30.0, static_cast<std::size_t>(state.range(0)));
  auto one = RadialProfile::sample(grid, [](double) { return 1.0; });
  auto f = RadialProfile::sample(grid, [](double r) { return std::exp(-r * r); });
  const RadialBVP bvp{one, f};
  for (auto _ : state) benchmark::DoNotOptimize(solve_bvp(bvp));
}
BENCHMARK(BM_SolveBvp)->Arg(3000)->Arg(30000);

void BM_Groundstate(benchmark::State& state) {
  const ProblemParams pp(3, 2, 2);
  auto grid = make_grid(3, 30.0, static_cast<std::size_t>(state.range(0)));
  auto kernel = assemble_kernel(grid, pp);
  for (auto _ : state) benchmark::DoNotOptimize(solve_groundstate(pp, kernel, SolverConfig{}));
}
BENCHMARK(BM_Groundstate)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_PairingCampaign(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_pairing_campaign(100, 1, 1));
}
BENCHMARK(BM_PairingCampaign)->Unit(benchmark::kMillisecond);

}  // namespace

// libbenchmark_main.a on this toolchain carries foreign LTO bytecode
BENCHMARK_MAIN();
