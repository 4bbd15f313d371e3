#include <benchmark/benchmark.h>

#include "sampcr/cr_engine.hpp"
#include "sampcr/model.hpp"

using namespace sampcr;

// Single-cell expected ratio: the inner kernel of the exact grid evaluation.
static void BM_ExpectedRatioCell(benchmark::State& state) {
    auto inst = ProblemInstance::two_type(50.0, 0.3, 0.9, 0.5);
    const long long n = state.range(0);
    cr_engine::ExactEvaluator eval(inst, n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval.expected_ratio(n, n));
    }
}
BENCHMARK(BM_ExpectedRatioCell)->Arg(50)->Arg(200)->Arg(800);

// Construction cost of the pmf windows and misidentification-probability
// table, which are shared across all grid cells and dominate setup time.
static void BM_EvaluatorSetup(benchmark::State& state) {
    const long long n = state.range(0);
    auto inst = ProblemInstance::two_type(static_cast<double>(n), 0.3, 0.9, 0.5);
    for (auto _ : state) {
        cr_engine::ExactEvaluator eval(inst, 3 * n, 3 * n);
        benchmark::DoNotOptimize(eval.expected_ratio(n, n));
    }
}
BENCHMARK(BM_EvaluatorSetup)->Arg(25)->Arg(50)->Arg(100);

// End-to-end infimum over the default grid at small m: the shape users hit
// through `sampcr cr-exact`.
static void BM_ExactCrSmall(benchmark::State& state) {
    const double m = static_cast<double>(state.range(0));
    auto inst = ProblemInstance::two_type(m, 0.5, 0.9, 0.5);
    const long long bound = cr_engine::default_grid_bound(inst);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cr_engine::exact_cr(inst, bound, bound, false));
    }
}
BENCHMARK(BM_ExactCrSmall)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
