#include "pdw/matdist.hpp"
#include "pdw/parallel.hpp"
#include "pdw/walks.hpp"

#include <benchmark/benchmark.h>

using namespace pdw;

namespace {

void run_batch(benchmark::State& state, ExecPolicy policy) {
    const Exec exec{policy, 256};
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    WalkConfig cfg;
    cfg.params = {3, 2.5, 6.0};
    for (auto _ : state) {
        auto out = parallel_generate<Mat>(
            n, 1, 0, [&](std::size_t, RngStream& rng) { return dufresne_series(cfg, 1e-10, 0, rng).matrix(); },
            exec);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DufresneSerial(benchmark::State& s) { run_batch(s, ExecPolicy::Serial); }
void BM_DufresneOpenMP(benchmark::State& s) { run_batch(s, ExecPolicy::OpenMP); }

void BM_Beta2Sampler(benchmark::State& state) {
    RngStream rng(1, 0);
    const ModelParams p{static_cast<int>(state.range(0)), 4.0, 8.0};
    for (auto _ : state) benchmark::DoNotOptimize(sample_beta2(p, rng));
}

}  // namespace

BENCHMARK(BM_DufresneSerial)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DufresneOpenMP)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Beta2Sampler)->DenseRange(1, 8, 1);

BENCHMARK_MAIN();
