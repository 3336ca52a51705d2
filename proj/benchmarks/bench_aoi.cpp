#include <vector>

#include <benchmark/benchmark.h>

#include "ledgerage/aoi.hpp"
#include "ledgerage/numerics.hpp"
#include "ledgerage/sim.hpp"

using namespace ledgerage;

namespace {

const aoi::AoiModel kDefault{{5.42, 2.84}, 9.0, 0.2635};
// rho < beta takes the single-series branch
const aoi::AoiModel kSlowArrivals{{8.28, 5.4}, 1.62, 0.2635};

void BM_SeriesPv(benchmark::State& state) {
  const aoi::AoiModel& m = state.range(0) == 0 ? kDefault : kSlowArrivals;
  const double v = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(aoi::aoi_violation_series(m, {v}));
}
BENCHMARK(BM_SeriesPv)->ArgsProduct({{0, 1}, {2, 5, 8}})->Unit(benchmark::kMicrosecond);

void BM_SeriesPpv(benchmark::State& state) {
  const double v = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aoi::paoi_violation(kDefault, {v}));
}
BENCHMARK(BM_SeriesPpv)->Arg(2)->Arg(5)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_QuadraturePv(benchmark::State& state) {
  const double v = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aoi::aoi_violation_quadrature(kDefault, {v}));
}
BENCHMARK(BM_QuadraturePv)->Arg(2)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_IntegerShape(benchmark::State& state) {
  const aoi::AoiModel m{{static_cast<double>(state.range(0)), 2.85}, 9.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(aoi::aoi_violation_integer(m, {5.0}));
}
BENCHMARK(BM_IntegerShape)->Arg(2)->Arg(5)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_Kummer(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(numerics::kummer_1f1(5.42, 12.84, z));
}
BENCHMARK(BM_Kummer)->Arg(-40)->Arg(-5)->Arg(5)->Arg(40);

void BM_IncompleteGamma(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(numerics::gamma_p(10.84, x));
}
BENCHMARK(BM_IncompleteGamma)->Arg(2)->Arg(11)->Arg(30);

void BM_SimulateMetrics(benchmark::State& state) {
  sim::SimConfig c;
  c.t_tx = 0.2635;
  c.stop = sim::StopRule::updates(static_cast<std::uint64_t>(state.range(0)));
  const std::vector<double> grid{1, 2, 3, 4, 5, 6, 7, 8};
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_metrics(c, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateMetrics)->Arg(200000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
