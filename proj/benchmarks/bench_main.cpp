#include <benchmark/benchmark.h>

#include "raftedge/experiment.hpp"
#include "raftedge/latency.hpp"
#include "raftedge/optimizer.hpp"
#include "raftedge/simnet.hpp"
#include "raftedge/special_functions.hpp"

namespace {

using namespace raftedge;

void BM_ExpectedLatency(benchmark::State& state) {
    LatencyParams p;
    for (auto _ : state) {
        p.lambda = 0.05 + (p.lambda > 1.0 ? -1.0 : 1e-6);
        benchmark::DoNotOptimize(expected_total_latency(p).total);
    }
}
BENCHMARK(BM_ExpectedLatency);

void BM_OptimalRate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_rate(static_cast<int>(state.range(0)), 0.1, 10.0));
    }
}
BENCHMARK(BM_OptimalRate)->Arg(2)->Arg(4)->Arg(8);

void BM_MarcumQ1(benchmark::State& state) {
    double a = 0.3;
    for (auto _ : state) {
        a = a > 5.0 ? 0.3 : a + 1e-4;
        benchmark::DoNotOptimize(marcum_q1(a, 1.3));
    }
}
BENCHMARK(BM_MarcumQ1);

void BM_NumericalArgmin(benchmark::State& state) {
    LatencyParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerical_argmin(p, 0.01, 2.0, 1e-6));
    }
}
BENCHMARK(BM_NumericalArgmin);

void BM_Simulation(benchmark::State& state) {
    SimConfig cfg;
    cfg.task_budget = static_cast<int>(state.range(0));
    for (auto _ : state) {
        cfg.seed += 1;
        benchmark::DoNotOptimize(run_simulation(cfg).stats.mean_latency);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulation)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
