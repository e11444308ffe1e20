#include <benchmark/benchmark.h>

#include <vector>

#include "sqrtw/paths.hpp"
#include "sqrtw/rng.hpp"

namespace {

void BM_PhiloxBlock(benchmark::State& state) {
    sqrtw::RandomStream rng(sqrtw::SeedSpec{1, 0}, sqrtw::StreamId::wiener());
    for (auto _ : state) benchmark::DoNotOptimize(rng.next_block());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxBlock);

void BM_Normal(benchmark::State& state) {
    auto rng = sqrtw::make_rng({1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Normal);

void BM_FillWiener(benchmark::State& state) {
    const sqrtw::TimeGrid grid(0.001, static_cast<std::size_t>(state.range(0)));
    std::vector<double> dw(grid.n_steps());
    std::uint64_t path = 0;
    for (auto _ : state) {
        sqrtw::RandomStream rng(sqrtw::SeedSpec{1, path++}, sqrtw::StreamId::wiener());
        sqrtw::fill_wiener(grid, rng, dw);
        benchmark::DoNotOptimize(dw.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillWiener)->Arg(1000);

}  // namespace
