#include <benchmark/benchmark.h>

#include "pairpot/estimator.hpp"
#include "pairpot/sampler.hpp"

using namespace pairpot;

namespace {

EstimatorOptions bench_opts() {
    EstimatorOptions opts;
    opts.range = 1.0;
    opts.bandwidth = 0.15;
    for (int i = 0; i <= 12; ++i) opts.r_grid.push_back(0.3 + 0.05 * i);
    return opts;
}

void bm_pair_sum(benchmark::State& state) {
    const Window w(2, static_cast<double>(state.range(0)));
    const PointPattern x = sample_poisson(w, 0.5, 7, 1.0);
    const EstimatorOptions opts = bench_opts();
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_R_hat(x, opts, 0.6));
    }
}

void bm_full_report(benchmark::State& state) {
    const Window w(2, static_cast<double>(state.range(0)));
    const PointPattern x = sample_poisson(w, 0.5, 7, 1.0);
    const EstimatorOptions opts = bench_opts();
    for (auto _ : state) {
        const EstimateReport report = estimate_phi(x, opts);
        benchmark::DoNotOptimize(report.beta_hat);
    }
}

void bm_sphere_average(benchmark::State& state) {
    const Window w(2, 20.0);
    const PointPattern x = sample_poisson(w, 0.5, 7, 1.0);
    const Point u(10.0, 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hstar(u, 0.6, x, 1.0, static_cast<int>(state.range(0))));
    }
}

} // namespace

BENCHMARK(bm_pair_sum)->Arg(20)->Arg(40);
BENCHMARK(bm_full_report)->Arg(20)->Arg(40);
BENCHMARK(bm_sphere_average)->Arg(64)->Arg(256);
