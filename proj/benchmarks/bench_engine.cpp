#include <benchmark/benchmark.h>

#include "vposc/diagnostics.hpp"
#include "vposc/engine.hpp"
#include "vposc/field.hpp"
#include "vposc/sampling.hpp"
#include "vposc/steady_state.hpp"

using namespace vposc;

namespace {

ParticleEnsemble kurth_ensemble(std::size_t n) {
  TilingSpec t;
  t.particles = n;
  return initialize_kurth(0.2, t);
}

}  // namespace

static void BM_Deposit(benchmark::State& state) {
  const ParticleEnsemble e = kurth_ensemble(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(deposit(e, 512));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.size()));
}
BENCHMARK(BM_Deposit)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_Push(benchmark::State& state) {
  ParticleEnsemble e = kurth_ensemble(static_cast<std::size_t>(state.range(0)));
  const RadialField f = deposit(e, 512);
  PushOptions o;
  o.frame = state.range(1) ? PushFrame::Hybrid : PushFrame::Planar;
  for (auto _ : state) benchmark::DoNotOptimize(push(e, f, 1e-4, o));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.size()));
}
BENCHMARK(BM_Push)->Args({1'000'000, 0})->Args({1'000'000, 1})->Unit(benchmark::kMillisecond);

// One full step as the engine takes it: deposit, then push.
static void BM_Step(benchmark::State& state) {
  ParticleEnsemble e = kurth_ensemble(static_cast<std::size_t>(state.range(0)));
  PushOptions o;
  for (auto _ : state) {
    const RadialField f = deposit(e, 512);
    benchmark::DoNotOptimize(push(e, f, 1e-3, o));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.size()));
}
BENCHMARK(BM_Step)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_PhaseHistogram(benchmark::State& state) {
  const ParticleEnsemble e = kurth_ensemble(1'000'000);
  const HistogramBinning b = HistogramBinning::around(e, 64, 64, 32);
  for (auto _ : state) benchmark::DoNotOptimize(phase_histogram(e, b));
}
BENCHMARK(BM_PhaseHistogram)->Unit(benchmark::kMillisecond);

static void BM_SteadyState(benchmark::State& state) {
  const AnsatzModel m = build_ansatz(Family::King, 0, 0, 0);
  GridSpec g;
  g.cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state(m, 1.0, g));
}
BENCHMARK(BM_SteadyState)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
