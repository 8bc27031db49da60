#include <benchmark/benchmark.h>

#include "pairpot/point_pattern.hpp"
#include "support/test_support.hpp"

using namespace pairpot;
using namespace pairpot::testing;

namespace {

void bm_grid_query(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double side = 40.0;
    const double range = 1.0;
    const Window w(2, side);
    const PointPattern pattern(w, random_points(2, side, n, 1), range);
    const std::vector<Point> queries = random_points(2, side, 512, 2);

    std::vector<Neighbor> out;
    std::size_t i = 0;
    for (auto _ : state) {
        pattern.neighbors_within_indexed(queries[i % queries.size()], range, out);
        benchmark::DoNotOptimize(out.data());
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void bm_brute_query(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double side = 40.0;
    const Window w(2, side);
    const std::vector<Point> pts = random_points(2, side, n, 1);
    const std::vector<Point> queries = random_points(2, side, 512, 2);

    std::size_t i = 0;
    for (auto _ : state) {
        auto nbrs = brute_force_neighbors(pts, queries[i % queries.size()], 1.0);
        benchmark::DoNotOptimize(nbrs.data());
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void bm_pattern_build(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double side = 40.0;
    const Window w(2, side);
    const std::vector<Point> pts = random_points(2, side, n, 1);
    for (auto _ : state) {
        PointPattern pattern(w, pts, 1.0);
        benchmark::DoNotOptimize(pattern.size());
    }
}

} // namespace

BENCHMARK(bm_grid_query)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(bm_brute_query)->Arg(1000)->Arg(10000);
BENCHMARK(bm_pattern_build)->Arg(1000)->Arg(10000);
