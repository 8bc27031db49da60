#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pairpot/pattern_io.hpp"
#include "pairpot/point_pattern.hpp"
#include "support/test_support.hpp"

using namespace pairpot;
using namespace pairpot::testing;

TEST_CASE("construction rejects bad inputs") {
    const Window w(2, 10.0);
    CHECK_THROWS_AS(PointPattern(w, {Point(11.0, 1.0)}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PointPattern(w, {Point(-0.1, 1.0)}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PointPattern(w, {Point(1.0, 1.0), Point(1.0, 1.0)}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("points keep insertion order") {
    const Window w(2, 10.0);
    const std::vector<Point> pts = {Point(3.0, 3.0), Point(1.0, 1.0), Point(2.0, 2.0)};
    const PointPattern pattern(w, pts, 1.0);
    REQUIRE(pattern.size() == 3);
    CHECK(pattern.point(0) == pts[0]);
    CHECK(pattern.point(1) == pts[1]);
    CHECK(pattern.point(2) == pts[2]);
}

TEST_CASE("neighbors_within basics") {
    const Window w(2, 10.0);

    SUBCASE("empty pattern") {
        const PointPattern pattern(w, {}, 1.0);
        CHECK(pattern.neighbors_within(Point(5.0, 5.0), 3.0).empty());
    }

    SUBCASE("3-4-5 triangle") {
        const PointPattern pattern(w, {Point(0.0, 0.0), Point(3.0, 4.0)}, 5.0);
        const auto nbrs = pattern.neighbors_within(Point(0.0, 0.0), 5.0);
        REQUIRE(nbrs.size() == 1);
        CHECK(nbrs[0].position == Point(3.0, 4.0));
        CHECK(nbrs[0].dist == doctest::Approx(5.0));
    }

    SUBCASE("query point equal to a pattern point is excluded") {
        const PointPattern pattern(w, {Point(2.0, 2.0), Point(2.5, 2.0)}, 1.0);
        const auto nbrs = pattern.neighbors_within(Point(2.0, 2.0), 1.0);
        REQUIRE(nbrs.size() == 1);
        CHECK(nbrs[0].dist == doctest::Approx(0.5));
    }
}

TEST_CASE("grid queries equal brute force on random patterns") {
    for (int dim = 1; dim <= 3; ++dim) {
        const double side = 15.0;
        const Window w(dim, side);
        const double range = 1.0;
        const std::vector<Point> pts = random_points(dim, side, 200, 1234 + dim);
        const PointPattern pattern(w, pts, range);

        std::mt19937_64 engine(999);
        std::uniform_real_distribution<double> u(0.0, side);
        std::uniform_real_distribution<double> radius_dist(0.05, range);
        for (int q = 0; q < 50; ++q) {
            Point query;
            for (int d = 0; d < dim; ++d) query[d] = u(engine);
            const double radius = radius_dist(engine);

            const auto got = pattern.neighbors_within(query, radius);
            const auto expected = brute_force_neighbors(pts, query, radius);

            std::set<std::size_t> got_ids;
            for (const auto& nb : got) got_ids.insert(nb.index);
            std::set<std::size_t> expected_ids;
            for (const auto& nb : expected) expected_ids.insert(nb.index);
            CHECK(got_ids == expected_ids);
        }
    }
}

TEST_CASE("queries beyond the grid radius stay exact") {
    const Window w(2, 20.0);
    const std::vector<Point> pts = random_points(2, 20.0, 300, 77);
    const PointPattern pattern(w, pts, 0.5); // index sized for radius 0.5

    std::mt19937_64 engine(31);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (double radius : {1.3, 4.0, 25.0}) {
        for (int q = 0; q < 10; ++q) {
            Point query;
            for (int d = 0; d < 2; ++d) query[d] = u(engine);
            const auto got = pattern.neighbors_within(query, radius);
            const auto expected = brute_force_neighbors(pts, query, radius);
            CHECK(got.size() == expected.size());
        }
    }
}

TEST_CASE("dist_to_pattern") {
    const Window w(2, 10.0);

    SUBCASE("empty pattern gives infinity") {
        const PointPattern pattern(w, {}, 1.0);
        CHECK(std::isinf(dist_to_pattern(Point(1.0, 1.0), pattern)));
    }

    SUBCASE("single point at 3-4-5 distance") {
        const PointPattern pattern(w, {Point(3.0, 4.0)}, 1.0);
        CHECK(dist_to_pattern(Point(0.0, 0.0), pattern) == doctest::Approx(5.0));
    }

    SUBCASE("matches exhaustive minimum on random data") {
        const std::vector<Point> pts = random_points(2, 10.0, 100, 5150);
        const PointPattern pattern(w, pts, 1.0);
        std::mt19937_64 engine(6);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int q = 0; q < 25; ++q) {
            const Point query(u(engine), u(engine));
            CHECK(dist_to_pattern(query, pattern) ==
                  doctest::Approx(brute_force_min_dist(pts, query)).epsilon(1e-12));
        }
    }

    SUBCASE("a point already in the pattern has distance zero") {
        const std::vector<Point> pts = random_points(2, 10.0, 50, 11);
        const PointPattern pattern(w, pts, 1.0);
        for (const Point& p : pts) {
            CHECK(dist_to_pattern(p, pattern) == 0.0);
        }
    }
}

TEST_CASE("indexed queries honor exclusions") {
    const Window w(2, 10.0);
    const PointPattern pattern(w, {Point(5.0, 5.0), Point(5.4, 5.0), Point(5.0, 5.3)}, 1.0);

    std::vector<Neighbor> out;
    pattern.neighbors_within_indexed(Point(5.0, 5.0), 1.0, out, 0);
    CHECK(out.size() == 2);
    pattern.neighbors_within_indexed(Point(5.0, 5.0), 1.0, out, 0, 1);
    CHECK(out.size() == 1);
    CHECK(pattern.has_neighbor_within(Point(5.0, 5.0), 1.0, 0));
    CHECK_FALSE(pattern.has_neighbor_within(Point(5.0, 5.0), 0.2, 0));
}

TEST_CASE("pattern CSV round-trips bit-exactly") {
    const Window w(2, 7.5);
    const std::vector<Point> pts = random_points(2, 7.5, 60, 404);
    const PointPattern pattern(w, pts, 1.0);

    const std::string text = pattern_to_csv(pattern);
    const PointPattern back = pattern_from_csv(text, 1.0);
    REQUIRE(back.size() == pattern.size());
    CHECK(back.window().side() == pattern.window().side());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        CHECK(back.point(i) == pattern.point(i)); // exact doubles
    }
}

TEST_CASE("pattern CSV rejects malformed input") {
    CHECK_THROWS(pattern_from_csv("bogus\n1,2\n"));
    CHECK_THROWS(pattern_from_csv("# dim=2 side=5\n1\n"));
    CHECK_THROWS(pattern_from_csv("# dim=2 side=5\n1,abc\n"));
    CHECK_THROWS(pattern_from_csv("# dim=2 side=5\n9,9\n")); // outside window
}
