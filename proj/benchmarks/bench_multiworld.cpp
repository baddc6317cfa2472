#include "macrofield/multiworld.hpp"

#include <benchmark/benchmark.h>

using namespace macrofield;

static void BM_ExportExperiment(benchmark::State& state) {
    const ModelParams strong;
    ModelParams weak = strong;
    weak.Y0 *= 0.5;
    weak.K0 *= 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(capital_export_experiment(strong, weak, 0.1, 25));
}
BENCHMARK(BM_ExportExperiment);

static void BM_WorldRing(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    WorldParams w;
    w.economies.assign(n, ModelParams{});
    for (std::size_t i = 0; i < n; ++i) {
        w.transfers.push_back({i, (i + 1) % n, TransferKind::capital, RateFn(0.01), true});
    }
    for (auto _ : state) benchmark::DoNotOptimize(integrate_world(w, 80));
}
BENCHMARK(BM_WorldRing)->Arg(2)->Arg(8)->Arg(32);
