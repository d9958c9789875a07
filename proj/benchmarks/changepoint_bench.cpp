#include "synthetic.hpp"

#include "stackindex/changepoint.hpp"

#include <benchmark/benchmark.h>

using namespace stackindex;

static void BM_DetectChangepoints(benchmark::State& state) {
    const auto series = bench::synthetic(static_cast<std::size_t>(state.range(0)));
    ChangePointOptions options;
    options.permutations = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(detect_changepoints(series, options));
}
BENCHMARK(BM_DetectChangepoints)
    ->Args({48, 1000})
    ->Args({132, 1000})
    ->Args({132, 5000})
    ->Args({240, 1000})
    ->Unit(benchmark::kMillisecond);
