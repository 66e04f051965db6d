#include "censorlab/censors.hpp"
#include "censorlab/channels.hpp"
#include "censorlab/protocol.hpp"
#include "censorlab/qmath.hpp"
#include "censorlab/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace censorlab;

namespace {

void BM_Kron(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Matrix a = ginibre(dim, dim, 1);
  const Matrix b = ginibre(dim, dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kron(a, b));
}
BENCHMARK(BM_Kron)->Arg(4)->Arg(8);

void BM_PartialTrace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DimProfile profile(std::vector<int>(static_cast<std::size_t>(n), 2));
  const Matrix rho = random_density(profile.total(), 3).matrix();
  for (auto _ : state)
    benchmark::DoNotOptimize(partial_trace(rho, profile, {0}));
}
BENCHMARK(BM_PartialTrace)->Arg(3)->Arg(5);

void BM_EigHermitian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Matrix g = ginibre(dim, dim, 4);
  const Matrix h = 0.5 * (g + g.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(h));
}
BENCHMARK(BM_EigHermitian)->Arg(16)->Arg(64);

void BM_SuperoperatorOf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<KrausChannel> parts(static_cast<std::size_t>(n), cq_censor_channel(2, 2));
  const KrausChannel ch = tensor_channels(parts);
  for (auto _ : state) benchmark::DoNotOptimize(superoperator_of(ch));
}
BENCHMARK(BM_SuperoperatorOf)->Arg(1)->Arg(2);

void BM_FixedPointSubspace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<KrausChannel> parts(static_cast<std::size_t>(n), dephasing_channel(2));
  const KrausChannel ch = tensor_channels(parts);
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_subspace(ch));
}
BENCHMARK(BM_FixedPointSubspace)->Arg(2)->Arg(3)->Arg(4);

void BM_ChoiPlusPpt(benchmark::State& state) {
  const KrausChannel ch = cq_censor_channel(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(is_entanglement_breaking(ch));
}
BENCHMARK(BM_ChoiPlusPpt);

void BM_BreakabilityPreset(benchmark::State& state) {
  const Preset preset = *find_preset(state.range(0) == 0 ? "coherence_censorship"
                                                         : "entanglement_break");
  const LoadedScenario loaded = load_scenario(preset.json_text);
  for (auto _ : state) benchmark::DoNotOptimize(breakability_analysis(loaded.scenario));
}
BENCHMARK(BM_BreakabilityPreset)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
