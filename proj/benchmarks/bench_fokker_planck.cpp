#include <benchmark/benchmark.h>

#include "sqrtw/fokker_planck.hpp"

namespace {

void BM_CrankNicolsonStep(benchmark::State& state) {
    const sqrtw::FPParams p{sqrtw::Complex{}, sqrtw::Complex{0.0, -0.25}, 0.0};
    const auto d = sqrtw::default_fp_domain(p, 0.5, 1.0, static_cast<std::size_t>(state.range(0)));
    auto init = sqrtw::sample_grid_function(d.x_min, d.x_max, d.n_points, [&](double x) {
        return sqrtw::fp_gaussian_solution(x, 0.0, p, 0.5);
    });
    sqrtw::CrankNicolsonFP solver(std::move(init), p, 1e-3);
    for (auto _ : state) solver.step();
    benchmark::DoNotOptimize(solver.state().values.data());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(4097)->Arg(16385);

}  // namespace
