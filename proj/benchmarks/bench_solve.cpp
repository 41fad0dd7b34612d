#include <benchmark/benchmark.h>

#include "poleswap/experiments.hpp"
#include "poleswap/rqz.hpp"

namespace {

using namespace poleswap;

void BM_Solve(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto method = static_cast<SwapMethod>(state.range(1));
  auto rng = trial_rng(9, 0);
  ComplexMatrix a(n, n), b(n, n);
  for (Index i = 0; i < n * n; ++i) a(i) = complex_normal(rng);
  for (Index i = 0; i < n * n; ++i) b(i) = complex_normal(rng);
  SolveOptions opt;
  opt.method = method;
  int sweeps = 0;
  for (auto _ : state) {
    const SolveResult r = solve(a, b, opt);
    sweeps = r.iterations;
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
  state.counters["sweeps"] = sweeps;
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Solve)
    ->ArgsProduct({{10, 25, 50, 100}, {static_cast<int>(SwapMethod::new_method), static_cast<int>(SwapMethod::van_dooren)}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
