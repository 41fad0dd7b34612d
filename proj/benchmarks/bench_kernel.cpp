#include <benchmark/benchmark.h>

#include <vector>

#include "poleswap/experiments.hpp"
#include "poleswap/oracle.hpp"
#include "poleswap/swap_kernel.hpp"

namespace {

using namespace poleswap;

std::vector<TriangularPencil2> stress_pencils(std::size_t count) {
  const StressDistribution dist{};
  std::vector<TriangularPencil2> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = trial_rng(42, i);
    out.push_back(random_stress_triangular(dist, rng));
  }
  return out;
}

void BM_Swap2x2(benchmark::State& state) {
  const auto method = static_cast<SwapMethod>(state.range(0));
  const auto pencils = stress_pencils(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(swap2x2(pencils[i++ & 4095], method));
  }
  state.SetLabel(std::string(to_string(method)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Swap2x2)
    ->Arg(static_cast<int>(SwapMethod::new_method))
    ->Arg(static_cast<int>(SwapMethod::van_dooren))
    ->Arg(static_cast<int>(SwapMethod::sylvester));

void BM_Oracle3x3(benchmark::State& state) {
  const StressDistribution dist{};
  std::vector<std::pair<Matrix3c, Matrix3c>> pairs;
  for (std::uint64_t i = 0; i < 256; ++i) {
    auto rng = trial_rng(43, i);
    pairs.emplace_back(random_stress_hessenberg(3, dist, rng), random_stress_hessenberg(3, dist, rng));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ & 255];
    benchmark::DoNotOptimize(eig_3x3_extended(a, b));
  }
}
BENCHMARK(BM_Oracle3x3);

}  // namespace
