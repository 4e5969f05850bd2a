#include <benchmark/benchmark.h>

#include <nlgrad/kernels.hpp>
#include <nlgrad/onedim.hpp>
#include <nlgrad/operators.hpp>
#include <nlgrad/solvers.hpp>
#include <nlgrad/symbols.hpp>

using namespace nlgrad;

namespace {

KernelSpec kernel(int family, int dim, double delta) {
  const KernelProfile p = family == 0 ? KernelProfile::constant() : KernelProfile::fractional(1.5);
  return KernelSpec::normalize(p, dim, delta);
}

// Symbol table construction: the dominant cost of every experiment.
void BM_BuildTable2D(benchmark::State& state) {
  const KernelSpec k = kernel(static_cast<int>(state.range(1)), 2, 0.1);
  const int bound = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(k, Orientation::angle(0.3), bound));
  state.SetComplexityN(bound);
}
BENCHMARK(BM_BuildTable2D)->ArgsProduct({{4, 8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_BuildTable3D(benchmark::State& state) {
  const KernelSpec k = kernel(0, 3, 0.1);
  const RVec n = RVec::Constant(3, 1.0 / std::sqrt(3.0));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(k, Orientation(n), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildTable3D)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

// Per-mode operator application once the table exists.
void BM_StokesSolve(benchmark::State& state) {
  const int bound = static_cast<int>(state.range(0));
  const SymbolTable t = build_table(kernel(0, 2, 0.1), Orientation::angle(0.3), bound);
  const SpectralField f = random_field(1, 2, bound, 2, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(stokes_steady(t, f));
}
BENCHMARK(BM_StokesSolve)->Arg(16)->Arg(32);

void BM_RhoPoint(benchmark::State& state) {
  const KernelSpec k = KernelSpec::normalize(KernelProfile::sine_example(), 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(rho_at(k, 0.3));
}
BENCHMARK(BM_RhoPoint);

}  // namespace

BENCHMARK_MAIN();
