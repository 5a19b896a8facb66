// Serial vs OpenMP comparison for the grid kernels. Each kernel has a serial
// reference used by the tests; these benchmarks confirm the parallel path is
// worth keeping wired in.

#include <benchmark/benchmark.h>

#include <cmath>

#include "ghom/convolution.hpp"
#include "ghom/grid.hpp"

namespace {

ghom::GridFunction make_bumpy(const ghom::TorusGrid& grid) {
    ghom::GridFunction u(grid, 0.0);
    for (std::int64_t c = 0; c < grid.cells(); ++c) {
        const ghom::Vec x = grid.center(c);
        u[c] = std::sin(7.0 * x[0]) * std::cos(3.0 * x[1]) + 0.2 * std::sin(29.0 * x[0] * x[1]);
    }
    return u;
}

void bm_inf_convolution(benchmark::State& state, ghom::Exec mode) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    ghom::TorusGrid grid(2, {n, n});
    const ghom::GridFunction u = make_bumpy(grid);
    for (auto _ : state) {
        auto env = ghom::inf_convolution(u, 0.05, mode);
        benchmark::DoNotOptimize(env.value[0]);
    }
    state.SetItemsProcessed(state.iterations() * grid.cells());
}

}  // namespace

BENCHMARK_CAPTURE(bm_inf_convolution, serial, ghom::Exec::Serial)->Arg(256)->Arg(512);
BENCHMARK_CAPTURE(bm_inf_convolution, openmp, ghom::Exec::Parallel)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
