#include <benchmark/benchmark.h>

#include "sqrtw/sqrt_process.hpp"

namespace {

void BM_SqrtStep(benchmark::State& state) {
    const sqrtw::SqrtParams p{};
    double dw = 0.031;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqrtw::sqrt_step(dw, 0.001, p));
        dw = -dw;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SqrtStep);

// One path of the reference grid, Wiener draws included.
void BM_SqrtPath(benchmark::State& state) {
    const sqrtw::TimeGrid grid(0.001, 1000);
    sqrtw::SqrtPathSimulator sim(grid, sqrtw::SqrtParams{}, 1);
    std::uint64_t path = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sim.run(path++).x.back());
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SqrtPath);

void BM_IntegrateSqrt(benchmark::State& state) {
    const sqrtw::TimeGrid grid(0.001, 1000);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto e = sqrtw::integrate_sqrt(grid, n, sqrtw::SqrtParams{}, 1, 1);
        benchmark::DoNotOptimize(e.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_IntegrateSqrt)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
