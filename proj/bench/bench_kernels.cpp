// Serial reference kernels against their OpenMP counterparts.
//
//   ./build/bench/bench_kernels --benchmark_filter=Evaluate

#include <benchmark/benchmark.h>

#include "bcop/grid.hpp"
#include "bcop/kemperman.hpp"
#include "bcop/operator.hpp"

namespace {

using namespace bcop;

void BM_EvaluateSerial(benchmark::State& state) {
  const auto b = make_bernstein_copula(make_family(Family::clayton, 2, 2.0), state.range(0));
  const auto pts = unit_lattice(2, 100);
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate_points(b, pts));
  state.SetItemsProcessed(state.iterations() * pts.size());
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto b = make_bernstein_copula(make_family(Family::clayton, 2, 2.0), state.range(0));
  const auto pts = unit_lattice(2, 100);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_points(b, pts));
  state.SetItemsProcessed(state.iterations() * pts.size());
}

void BM_SampleSerial(benchmark::State& state) {
  const auto c = make_family(Family::clayton, 2, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(serial::sample_batch(c, state.range(0), 20000, 1));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_SampleParallel(benchmark::State& state) {
  const auto c = make_family(Family::clayton, 2, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_batch(c, state.range(0), 20000, 1));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_GridSerial(benchmark::State& state) {
  const auto c = make_family(Family::clayton, 3, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(serial::sample_grid(c, state.range(0)));
}

void BM_GridParallel(benchmark::State& state) {
  const auto c = make_family(Family::clayton, 3, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_grid(c, state.range(0)));
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSerial)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleParallel)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
