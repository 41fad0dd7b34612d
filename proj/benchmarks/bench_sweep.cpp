#include <benchmark/benchmark.h>

#include "poleswap/experiments.hpp"
#include "poleswap/pencil.hpp"
#include "poleswap/rqz.hpp"

namespace {

using namespace poleswap;

HessenbergPencil random_ht(Index n, std::uint64_t seed) {
  auto rng = trial_rng(seed, 0);
  ComplexMatrix a(n, n), b(n, n);
  for (Index i = 0; i < n * n; ++i) a(i) = complex_normal(rng);
  for (Index i = 0; i < n * n; ++i) b(i) = complex_normal(rng);
  return reduce_to_hessenberg_triangular(a, b).pencil;
}

// One basic sweep restores the input each iteration; the copy is timed too
// but is O(n^2) against the O(n^2) sweep with accumulation off.
void BM_BasicSweep(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const HessenbergPencil base = random_ht(n, 7);
  const ProjectiveValue rho = ProjectiveValue::finite({0.3, -0.2});
  for (auto _ : state) {
    HessenbergPencil p = base;
    benchmark::DoNotOptimize(basic_sweep(p, rho, ProjectiveValue::infinity()));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BasicSweep)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNSquared);

void BM_MultishiftSweep(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const HessenbergPencil base = random_ht(n, 8);
  const std::vector<ProjectiveValue> shifts{ProjectiveValue::finite({0.3, -0.2}), ProjectiveValue::finite({-0.5, 0.1})};
  const std::vector<ProjectiveValue> poles{ProjectiveValue::infinity(), ProjectiveValue::infinity()};
  for (auto _ : state) {
    HessenbergPencil p = base;
    benchmark::DoNotOptimize(multishift_sweep(p, shifts, poles));
  }
}
BENCHMARK(BM_MultishiftSweep)->RangeMultiplier(2)->Range(8, 128);

}  // namespace
