#include "macrofield/analytic.hpp"

#include <benchmark/benchmark.h>

using namespace macrofield;

static void BM_BasisSolution(benchmark::State& state) {
    const double p_n = state.range(0) == 0 ? -0.055 : 0.02;
    const auto b = make_branch(p_n, 0.1, 1.0, 0.4);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(basis_solution(b, t));
        t += 0.01;
        if (t > 50.0) t = 0.0;
    }
}
BENCHMARK(BM_BasisSolution)->Arg(0)->Arg(1);

static void BM_ClassifyRegime(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(classify_regime(0.055, 0.7, 0.1));
}
BENCHMARK(BM_ClassifyRegime);

static void BM_PiecewiseSolution(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(piecewise_solution(p, 80));
}
BENCHMARK(BM_PiecewiseSolution);
