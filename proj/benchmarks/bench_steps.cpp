#include "chernoff/convex_expectation.hpp"
#include "chernoff/mollifier.hpp"
#include "chernoff/nisio.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace chernoff;

namespace {

GridFunction payoff(std::size_t n) {
  Grid g = Grid::line(-8.0, 8.0, n);
  return GridFunction::sample(g, [](std::span<const double> x) { return std::min(std::abs(x[0]), 1.0); });
}

}  // namespace

static void BM_NisioStep(benchmark::State& state) {
  auto f = payoff(static_cast<std::size_t>(state.range(0)));
  NisioOperator op(NisioFamily(1, {Control::scalar(0.5), Control::scalar(1.0)}));
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(f, 1.0 / 64));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NisioStep)->Arg(513)->Arg(2049)->Arg(8193);

static void BM_CltStep(benchmark::State& state) {
  auto f = payoff(static_cast<std::size_t>(state.range(0)));
  CltOperator op(ScenarioConvexExpectation({Scenario::gaussian1d(0.0, 0.5), Scenario::gaussian1d(0.0, 1.0)}));
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(f, 1.0 / 64));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CltStep)->Arg(513)->Arg(2049);

static void BM_Nisio2d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Grid g = Grid::plane({-6.0, -6.0}, {6.0, 6.0}, {n, n});
  auto f = GridFunction::sample(g, [](std::span<const double> x) { return std::abs(x[0]) + std::abs(x[1]); });
  Control a, b;
  a.sigma = {{{0.5, 0.0}, {0.0, 0.5}}};
  b.sigma = {{{1.0, 0.0}, {0.5, 0.5}}};
  NisioOperator op(NisioFamily(2, {a, b}));
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(f, 1.0 / 16));
}
BENCHMARK(BM_Nisio2d)->Arg(65)->Arg(129);

static void BM_KernelTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(MollifierKernel(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_KernelTable)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
