#include <benchmark/benchmark.h>

#include "sinkguard/batch.hpp"
#include "sinkguard/kernels.hpp"
#include "sinkguard/rng.hpp"
#include "sinkguard/scenario.hpp"

using namespace sinkguard;

namespace {

std::vector<Point> points(std::size_t n) {
  Rng rng(42);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {rng.uniform(0, 100), rng.uniform(0, 100)};
  return pts;
}

std::vector<Cell> cells(int count) {
  RunPlan plan;
  plan.base = *preset("scenario3_small");
  plan.base.duration_s = 50;
  plan.axis = "attack_interval_s";
  plan.values = {"0.5", "1", "2", "4"};
  for (int s = 1; s <= count / 4; ++s) plan.seeds.push_back(static_cast<std::uint64_t>(s));
  return expand(plan);
}

void BM_AdjacencySerial(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_adjacency_serial(pts, 20.0));
  state.SetComplexityN(state.range(0));
}

void BM_AdjacencyParallel(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_adjacency_parallel(pts, 20.0));
  state.SetComplexityN(state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cs = cells(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_cells_serial(cs));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cs = cells(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_cells_parallel(cs));
}

}  // namespace

BENCHMARK(BM_AdjacencySerial)->RangeMultiplier(4)->Range(128, 8192)->Complexity();
BENCHMARK(BM_AdjacencyParallel)->RangeMultiplier(4)->Range(128, 8192)->Complexity();
BENCHMARK(BM_SweepSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
