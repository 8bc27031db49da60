#include <doctest.h>

#include <cmath>

#include "pairpot/errors.hpp"
#include "pairpot/sampler.hpp"
#include "support/test_support.hpp"

using namespace pairpot;
using namespace pairpot::testing;

TEST_CASE("poisson sampling basics") {
    SUBCASE("all coordinates inside the window") {
        const Window w(2, 7.0);
        const PointPattern x = sample_poisson(w, 1.5, 11, 1.0);
        for (const Point& p : x.points()) {
            CHECK(w.contains(p));
        }
    }

    SUBCASE("vanishing mean gives an empty pattern") {
        const Window w(2, 0.5);
        const PointPattern x = sample_poisson(w, 1e-12, 3, 1.0);
        CHECK(x.empty());
    }

    SUBCASE("sanity cap") {
        const Window w(3, 1000.0);
        CHECK_THROWS_AS(sample_poisson(w, 1.0, 1, 1.0), ResourceError);
    }

    SUBCASE("identical seeds reproduce the draw bit-exactly") {
        const Window w(2, 9.0);
        const PointPattern a = sample_poisson(w, 0.8, 42, 1.0);
        const PointPattern b = sample_poisson(w, 0.8, 42, 1.0);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.point(i) == b.point(i));
        const PointPattern c = sample_poisson(w, 0.8, 43, 1.0);
        const bool same = a.size() == c.size() && [&] {
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (!(a.point(i) == c.point(i))) return false;
            }
            return true;
        }();
        CHECK_FALSE(same);
    }

    SUBCASE("mean count over 1000 draws matches the poisson law at 3 sigma") {
        const Window w(2, 10.0);
        const double beta = 2.0;
        const double mean_target = beta * w.volume(); // 200
        const int draws = 1000;
        std::vector<double> counts;
        for (int i = 0; i < draws; ++i) {
            counts.push_back(static_cast<double>(sample_poisson(w, beta, 7000 + i).size()));
        }
        const double mean = mean_of(counts);
        const double stderr_mean = std::sqrt(mean_target / draws);
        CHECK(std::fabs(mean - mean_target) <= 3.0 * stderr_mean);
    }
}

TEST_CASE("chain configuration") {
    const Model m = Model::strauss(0.5, 0.5, 1.0);
    const Window w(2, 10.0);

    SUBCASE("defaults scale with beta |W|") {
        const ChainConfig resolved = ChainConfig{}.resolved(m, w);
        CHECK(resolved.burn_in == 1000); // max(1000, 10 * 0.5 * 100)
        CHECK(resolved.steps == 2000);
        const ChainConfig big = ChainConfig{}.resolved(Model::strauss(4.0, 0.5, 1.0), w);
        CHECK(big.burn_in == 4000);
    }

    SUBCASE("burn-in must stay below steps") {
        ChainConfig cfg;
        cfg.steps = 100;
        cfg.burn_in = 100;
        CHECK_THROWS_AS(cfg.resolved(m, w), std::invalid_argument);
    }
}

TEST_CASE("birth-death chain determinism") {
    const Model m = Model::strauss(0.5, 0.5, 1.0);
    const Window w(2, 8.0);
    ChainConfig cfg;
    cfg.seed = 2024;

    const PointPattern a = run_birth_death(m, w, cfg);
    const PointPattern b = run_birth_death(m, w, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.point(i) == b.point(i));

    cfg.seed = 2025;
    const PointPattern c = run_birth_death(m, w, cfg);
    bool same = a.size() == c.size();
    if (same) {
        for (std::size_t i = 0; i < a.size(); ++i) same = same && a.point(i) == c.point(i);
    }
    CHECK_FALSE(same);
}

TEST_CASE("torus and empty-start modes run and stay in the window") {
    const Model m = Model::strauss(0.5, 0.3, 1.0);
    const Window w(2, 8.0);
    ChainConfig cfg;
    cfg.seed = 5;
    cfg.boundary = ChainConfig::Boundary::torus;
    cfg.initial = ChainConfig::Initial::empty;
    const PointPattern x = run_birth_death(m, w, cfg);
    for (const Point& p : x.points()) CHECK(w.contains(p));
    CHECK(x.size() > 0);
}

TEST_CASE("gnz argument errors") {
    const Model m = Model::poisson(0.5);
    const Window w(2, 8.0);
    GnzTestFunction fn;
    fn.region = Box{2, Point(2.0, 2.0), Point(6.0, 6.0)};
    CHECK_THROWS_AS(gnz_residual(m, w, 0, ChainConfig{}, fn), std::invalid_argument);

    GnzTestFunction outside;
    outside.region = Box{2, Point(2.0, 2.0), Point(9.0, 6.0)};
    CHECK_THROWS_AS(gnz_residual(m, w, 4, ChainConfig{}, outside), std::invalid_argument);

    CHECK_THROWS_AS(gnz_pair_residual(m, w, 0, ChainConfig{}, fn.region, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(gnz_pair_residual(m, w, 4, ChainConfig{}, Box{2, Point(0.5, 2.0), Point(6.0, 6.0)}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("gnz on an empty region is exactly balanced") {
    const Model m = Model::poisson(0.5);
    const Window w(2, 8.0);
    GnzTestFunction fn;
    fn.region = Box{2, Point(4.0, 4.0), Point(4.0, 4.0)};
    ChainConfig cfg;
    cfg.seed = 9;
    const GnzReport report = gnz_residual(m, w, 8, cfg, fn, 8);
    CHECK(report.lhs == 0.0);
    CHECK(report.rhs == 0.0);
    CHECK(report.z_score == 0.0);
}
