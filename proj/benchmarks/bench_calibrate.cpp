#include "macrofield/calibrate.hpp"
#include "macrofield/dataset.hpp"

#include <benchmark/benchmark.h>

using namespace macrofield;

static void BM_DeriveIndicators(benchmark::State& state) {
    const auto s = frg_dataset();
    for (auto _ : state) benchmark::DoNotOptimize(derive_indicators(s));
}
BENCHMARK(BM_DeriveIndicators);

static void BM_FitPrel(benchmark::State& state) {
    const auto s = frg_dataset();
    PrelFitOptions o;
    o.constrained = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(fit_prel_exponential(s, o));
}
BENCHMARK(BM_FitPrel)->Arg(0)->Arg(1);

static void BM_FitQuadraticYK(benchmark::State& state) {
    const auto s = frg_dataset();
    for (auto _ : state) benchmark::DoNotOptimize(fit_quadratic_YK(s));
}
BENCHMARK(BM_FitQuadraticYK);
