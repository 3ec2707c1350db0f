#include <benchmark/benchmark.h>

#include <cmath>

#include "geophase/analysis.hpp"
#include "geophase/angle.hpp"
#include "geophase/correlation.hpp"

using namespace geophase;

namespace {

const SurfaceSpec kTorus(1);

CycleAssignment canonical_assignment() {
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  return CycleAssignment({kTwoPi * golden, kTwoPi * (std::sqrt(3.0) - 1.0)}, {1.0, std::sqrt(2.0)});
}

PhaseSequence sequence(double horizon) {
  return PhaseSequence(kTorus, WindingChain(kTorus, {1, 1}), canonical_assignment(), horizon);
}

}  // namespace

static void BM_CorrelationGrid(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const auto pair = PairConfig::exchanged(kTorus, WindingChain(kTorus, {1, 0}),
                                          WindingChain(kTorus, {0, 1}), canonical_assignment(), t);
  const auto grid = uniform_angle_grid(8);
  for (auto _ : state) benchmark::DoNotOptimize(correlations(pair, grid, t));
}
BENCHMARK(BM_CorrelationGrid)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_PhaseAt(benchmark::State& state) {
  const auto seq = sequence(1e9);
  double tau = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phase_at(seq, tau));
    tau = tau * 1.0001 + 0.37;
    if (tau > 1e9) tau = 1.0;
  }
}
BENCHMARK(BM_PhaseAt);

static void BM_EventsIn(benchmark::State& state) {
  const auto seq = sequence(1e6);
  const double width = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(events_in(seq, 5e5, 5e5 + width));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seq.event_count(width)));
}
BENCHMARK(BM_EventsIn)->Arg(1'000)->Arg(100'000);

static void BM_FindAlmostPeriods(benchmark::State& state) {
  const auto seq = sequence(1e4);
  for (auto _ : state) benchmark::DoNotOptimize(find_almost_periods(seq, 0.3, 64.0, 0.5, 512.0));
}
BENCHMARK(BM_FindAlmostPeriods)->Unit(benchmark::kMillisecond);

static void BM_RandomnessBattery(benchmark::State& state) {
  const auto seq = sequence(1e6);
  for (auto _ : state) benchmark::DoNotOptimize(randomness_battery(seq, 1e6, 100'000));
}
BENCHMARK(BM_RandomnessBattery)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
