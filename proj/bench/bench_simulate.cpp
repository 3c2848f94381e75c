#include <benchmark/benchmark.h>

#include "cmc/copulae.hpp"
#include "cmc/simulate.hpp"

namespace {

cmc::CmcModel bench_model() {
    const cmc::TimeGrid grid = cmc::TimeGrid::uniform(1.0, 0.05);
    const cmc::PiecewisePath one = cmc::PiecewisePath::constant(grid, 1.0);
    return cmc::build_weak_only(grid, one, one, one).model;
}

void bm_simulate_serial(benchmark::State& state) {
    const cmc::CmcModel model = bench_model();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        cmc::PathBundle bundle = cmc::simulate_reference(model, n, 42);
        benchmark::DoNotOptimize(bundle.occupation.sum());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_simulate_parallel(benchmark::State& state) {
    const cmc::CmcModel model = bench_model();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        cmc::PathBundle bundle = cmc::simulate(model, n, 42);
        benchmark::DoNotOptimize(bundle.occupation.sum());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(bm_simulate_serial)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_simulate_parallel)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
