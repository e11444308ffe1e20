#include <benchmark/benchmark.h>

#include "sqrtw/stats.hpp"

namespace {

// Streaming Table-1 statistics, single thread.
void BM_Table1(benchmark::State& state) {
    const sqrtw::TimeGrid grid(0.001, 1000);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto t = sqrtw::run_table1(grid, n, sqrtw::SqrtParams{}, 1, 1);
        benchmark::DoNotOptimize(t.square_root.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Table1)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ComplexMomentsPush(benchmark::State& state) {
    sqrtw::ComplexMoments m;
    sqrtw::Complex z{0.5, 0.25};
    for (auto _ : state) {
        m.push(z);
        z = {z.imag(), z.real()};
    }
    benchmark::DoNotOptimize(m.mean());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ComplexMomentsPush);

}  // namespace
