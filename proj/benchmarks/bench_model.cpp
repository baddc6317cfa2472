#include "macrofield/model.hpp"

#include <benchmark/benchmark.h>

using namespace macrofield;

static void BM_IntegrateRK4(benchmark::State& state) {
    IntegrateOptions o;
    o.step = 1.0 / static_cast<double>(state.range(0));
    o.allow_negative = true;
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(p, o));
}
BENCHMARK(BM_IntegrateRK4)->Arg(4)->Arg(64)->Arg(1000);

static void BM_IntegrateEuler(benchmark::State& state) {
    IntegrateOptions o;
    o.step = 1.0 / static_cast<double>(state.range(0));
    o.method = Method::euler;
    o.allow_negative = true;
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(p, o));
}
BENCHMARK(BM_IntegrateEuler)->Arg(4)->Arg(1000);
