#include <benchmark/benchmark.h>

#include "pairpot/sampler.hpp"

using namespace pairpot;

namespace {

void bm_poisson_sample(benchmark::State& state) {
    const Window w(2, static_cast<double>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_poisson(w, 0.5, ++seed, 1.0).size());
    }
}

void bm_birth_death_strauss(benchmark::State& state) {
    const Window w(2, static_cast<double>(state.range(0)));
    const Model m = Model::strauss(0.5, 0.5, 1.0);
    ChainConfig cfg;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        cfg.seed = ++seed;
        benchmark::DoNotOptimize(run_birth_death(m, w, cfg).size());
    }
    const ChainConfig resolved = cfg.resolved(m, w);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(resolved.steps));
}

} // namespace

BENCHMARK(bm_poisson_sample)->Arg(20)->Arg(40);
BENCHMARK(bm_birth_death_strauss)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);
