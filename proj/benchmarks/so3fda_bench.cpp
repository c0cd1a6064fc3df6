#include <benchmark/benchmark.h>

#include "so3fda/estimate.hpp"
#include "so3fda/gpsim.hpp"
#include "so3fda/parallel.hpp"
#include "so3fda/permutation.hpp"

namespace {

using namespace so3fda;

std::vector<RotCurve> draws(ModelId model, std::size_t n, std::uint64_t seed) {
  const TimeGrid grid = TimeGrid::uniform(101);
  return sample_gp(make_model(model, grid), n, CounterRng(seed));
}

void BM_ExpLog(benchmark::State& state) {
  const Vec3 a(0.3, -1.2, 0.7);
  for (auto _ : state) {
    const Rotation3 r = exp_so3(a);
    benchmark::DoNotOptimize(log_so3(r));
  }
}
BENCHMARK(BM_ExpLog);

void BM_Pem(benchmark::State& state) {
  const auto sample = draws(ModelId::kA0, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(pem(sample));
}
BENCHMARK(BM_Pem)->Arg(10)->Arg(100);

void BM_SpatialAlign(benchmark::State& state) {
  const auto a = draws(ModelId::kA0, 1, 3), b = draws(ModelId::kB2, 1, 4);
  for (auto _ : state) benchmark::DoNotOptimize(spatial_align(a[0], b[0]));
}
BENCHMARK(BM_SpatialAlign);

void BM_TemporalAlign(benchmark::State& state) {
  const auto a = draws(ModelId::kA0, 1, 5), b = draws(ModelId::kB2, 1, 6);
  TemporalOptions opts;
  opts.slope_window = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(temporal_align_with_cost(a[0], b[0], opts));
}
BENCHMARK(BM_TemporalAlign)->Arg(2)->Arg(3);

void BM_SampleAlign(benchmark::State& state) {
  const auto a = draws(ModelId::kA0, 10, 7), b = draws(ModelId::kA0, 10, 8);
  SampleAlignOptions opts;
  opts.use_temporal = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_align(a, b, opts));
}
BENCHMARK(BM_SampleAlign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PermutationTest(benchmark::State& state) {
  set_worker_threads(1);
  const auto a = draws(ModelId::kA0, 10, 9), b = draws(ModelId::kA0, 10, 10);
  const auto plan = PermutationPlan::make(10, 10, 100, 1);
  TestOptions opts;
  opts.align.use_temporal = false;
  const auto variant = static_cast<TestVariant>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_test(variant, a, b, plan, opts));
}
BENCHMARK(BM_PermutationTest)
    ->Arg(static_cast<int>(TestVariant::kNone))
    ->Arg(static_cast<int>(TestVariant::kPrereg))
    ->Arg(static_cast<int>(TestVariant::kContinual))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
