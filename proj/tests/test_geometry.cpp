#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pairpot/geometry.hpp"

using namespace pairpot;

TEST_CASE("window construction and volume") {
    const Window w(2, 10.0);
    CHECK(w.volume() == doctest::Approx(100.0));
    CHECK(Window(3, 2.0).volume() == doctest::Approx(8.0));
    CHECK(Window(1, 5.0).volume() == doctest::Approx(5.0));

    CHECK_THROWS_AS(Window(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Window(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Window(2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Window(2, -1.0), std::invalid_argument);
}

TEST_CASE("erosion of a 10x10 window") {
    const Window w(2, 10.0);

    const ErodedRegion inner = erode(w, 2.0);
    CHECK(inner.lo() == doctest::Approx(2.0));
    CHECK(inner.hi() == doctest::Approx(8.0));
    CHECK(inner.volume() == doctest::Approx(36.0));
    CHECK_FALSE(inner.empty());

    const ErodedRegion same = erode(w, 0.0);
    CHECK(same.volume() == doctest::Approx(100.0));

    const ErodedRegion none = erode(w, 5.0);
    CHECK(none.empty());
    CHECK(none.volume() == 0.0);

    CHECK_THROWS_AS(erode(w, -0.1), std::invalid_argument);
}

TEST_CASE("erosion composes additively") {
    for (int dim = 1; dim <= 3; ++dim) {
        const Window w(dim, 9.0);
        for (double a : {0.5, 1.25, 2.0}) {
            for (double b : {0.25, 1.0, 1.5}) {
                const Window inner_window(dim, w.side() - 2.0 * a);
                const double two_step = inner_window.erode(b).volume();
                const double one_step = w.erode(a + b).volume();
                CHECK(two_step == doctest::Approx(one_step).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("region and box membership") {
    const Window w(2, 10.0);
    const ErodedRegion inner = w.erode(2.0);
    CHECK(inner.contains(Point(5.0, 5.0)));
    CHECK(inner.contains(Point(2.0, 8.0)));
    CHECK_FALSE(inner.contains(Point(1.9, 5.0)));

    Box box;
    box.dim = 2;
    box.lo = Point(1.0, 1.0);
    box.hi = Point(3.0, 4.0);
    CHECK(box.volume() == doctest::Approx(6.0));
    CHECK(box.contains(Point(2.0, 2.0)));
    CHECK_FALSE(box.contains(Point(0.5, 2.0)));

    Box degenerate;
    degenerate.dim = 2;
    degenerate.lo = Point(1.0, 1.0);
    degenerate.hi = Point(1.0, 4.0);
    CHECK(degenerate.volume() == 0.0);
}

TEST_CASE("sphere measure per dimension") {
    CHECK(sphere_measure(1) == doctest::Approx(2.0));
    CHECK(sphere_measure(2) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(sphere_measure(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("torus metric wraps per axis") {
    const Metric flat{2, 10.0, false};
    const Metric torus{2, 10.0, true};
    const Point a(0.5, 5.0);
    const Point b(9.5, 5.0);
    CHECK(flat(a, b) == doctest::Approx(9.0));
    CHECK(torus(a, b) == doctest::Approx(1.0));
    CHECK(torus(a, a) == 0.0);
}
