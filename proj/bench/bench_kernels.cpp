#include "akgraph/cli.hpp"
#include "akgraph/config.hpp"
#include "akgraph/hjb_oracle.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace akgraph;

EconomyNetwork symmetric_pair() {
    const double w[] = {0.1};
    return EconomyNetwork::from_upper_triangle(2, w, {0.1, 0.1}, 0.1, 0.5, {1.0, 1.0}, {1.0, 1.0});
}

EconomyNetwork three_regions() {
    const double w[] = {0.04, 0.03, 0.05};
    const double third = 1.0 / 3.0;
    return EconomyNetwork::from_upper_triangle(3, w, {0.10, 0.12, 0.08}, 0.03, 3.0, {third, third, third},
                                               {1.0, 1.0, 1.0});
}

void BM_HjbGrid(benchmark::State& state, Execution exec) {
    const EconomyNetwork net = symmetric_pair();
    const GridSpec spec = square_grid(2, 0.0, 2.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        GridValue gv = solve_hjb_grid(net, spec, exec);
        benchmark::DoNotOptimize(gv.values.data());
    }
}

void BM_WeightSweep(benchmark::State& state, Execution exec) {
    const EconomyNetwork net = three_regions();
    const Vector values = linspace(0.0055, 0.03, 50);
    for (auto _ : state) {
        auto rows = compute_sweep(net, 0, 2, values, static_cast<double>(state.range(0)), exec);
        benchmark::DoNotOptimize(rows.data());
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_HjbGrid, serial, Execution::serial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_HjbGrid, parallel, Execution::parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_WeightSweep, serial, Execution::serial)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_WeightSweep, parallel, Execution::parallel)->Arg(300)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
