#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vtrack/config.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

using namespace vtrack;

TEST_CASE("arclength") {
    CHECK(arclength(Polyline{{{0, 0}, {3, 4}}}) == doctest::Approx(5.0));
    CHECK(arclength(Polyline{{{0, 0}, {1, 0}, {2, 0}}}) == doctest::Approx(2.0));
    CHECK(arclength(Polyline{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}}) == doctest::Approx(30.0));
    CHECK(arclength(Polyline{{{5, 5}}}) == 0.0);
}

TEST_CASE("resample straight segment at unit spacing") {
    const Polyline p{{{0, 0}, {10, 0}}};
    const Polyline r = resample_polyline(p, 1.0);
    REQUIRE(r.size() == 11);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r.points[i].x == doctest::Approx(double(i)));
        CHECK(r.points[i].y == 0.0);
    }
}

TEST_CASE("resample with spacing equal to the length keeps the endpoints") {
    const Polyline p{{{0, 0}, {4, 3}, {8, 0}}};
    const Polyline r = resample_polyline(p, arclength(p));
    REQUIRE(r.size() == 2);
    CHECK(r.front() == p.front());
    CHECK(r.back() == p.back());

    const Polyline shorter = resample_polyline(Polyline{{{0, 0}, {0.3, 0}}}, 1.0);
    CHECK(shorter.size() == 2);
}

TEST_CASE("resample quarter circle") {
    Polyline arc;
    for (int d = 0; d <= 90; ++d) {
        const double a = d * std::numbers::pi / 180.0;
        arc.points.push_back({20.0 * std::cos(a), 20.0 * std::sin(a)});
    }
    const Polyline r = resample_polyline(arc, 2.0);
    const double expected = std::round(std::numbers::pi * 20.0 / 2.0 / 2.0) + 1.0;
    CHECK(std::abs(double(r.size()) - expected) <= 1.0);
    for (const Point& q : r.points) CHECK(std::abs(std::hypot(q.x, q.y) - 20.0) <= 0.5);
    CHECK(r.front() == arc.front());
    CHECK(r.back() == arc.back());
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::abs(distance(r.points[i - 1], r.points[i]) - 2.0) <= 0.5);
}

// Curves that turn by at most 30 degrees per vertex, like vessel branches.
TEST_CASE("resample preserves length and is deterministic") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> turn(-0.52, 0.52);
    std::uniform_real_distribution<double> step(4.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        Polyline p;
        Point cur{100, 100};
        double heading = turn(rng) * 6.0;
        p.points.push_back(cur);
        for (int k = 0; k < 8; ++k) {
            heading += turn(rng);
            const double len = step(rng);
            cur = cur + Point{len * std::cos(heading), len * std::sin(heading)};
            p.points.push_back(cur);
        }
        for (double spacing : {0.5, 1.0, 3.0}) {
            const Polyline r = resample_polyline(p, spacing);
            CHECK(std::abs(arclength(r) - arclength(p)) < spacing);
            CHECK(r == resample_polyline(p, spacing));
            CHECK(r.front() == p.front());
            CHECK(r.back() == p.back());
        }
    }
    CHECK_THROWS_AS(resample_polyline(Polyline{{{0, 0}, {1, 1}}}, 0.0), Error);
}

TEST_CASE("pixel chain density") {
    CHECK(is_pixel_chain(Polyline{{{0, 0}, {1, 1}, {3, 2}}}));
    CHECK_FALSE(is_pixel_chain(Polyline{{{0, 0}}}));
    CHECK_FALSE(is_pixel_chain(Polyline{{{0, 0}, {0, 0}}}));
    CHECK_FALSE(is_pixel_chain(Polyline{{{0, 0}, {3, 0}}}));
    CHECK_FALSE(is_pixel_chain(Polyline{{{0, 0}, {NAN, 0}}}));
}

TEST_CASE("interpolate_segment steps") {
    const auto pts = interpolate_segment({0, 0}, {5, 2});
    REQUIRE(pts.size() == 5);
    CHECK(pts.back() == Point{5, 2});
    Point prev{0, 0};
    for (const Point& q : pts) {
        CHECK(chebyshev(prev, q) <= 1.0 + 1e-12);
        prev = q;
    }
}

TEST_CASE("bresenham is 8-connected and inclusive") {
    const auto px = bresenham({2, 3}, {9, -1});
    CHECK(px.front() == std::pair{2, 3});
    CHECK(px.back() == std::pair{9, -1});
    for (std::size_t i = 1; i < px.size(); ++i) {
        CHECK(std::abs(px[i].first - px[i - 1].first) <= 1);
        CHECK(std::abs(px[i].second - px[i - 1].second) <= 1);
    }
}

TEST_CASE("image frame invariants") {
    CHECK_THROWS_AS(Grid<double>(0, 4), Error);
    Grid<double> g(3, 2, 0.5);
    CHECK_NOTHROW(ImageFrame{g});
    g(1, 1) = 1.5;
    CHECK_THROWS_AS(ImageFrame{g}, Error);
    g(1, 1) = NAN;
    CHECK_THROWS_AS(ImageFrame{g}, Error);
    const ImageFrame c = ImageFrame::clamped(g);
    CHECK(c(1, 1) == 0.0);
    g(0, 0) = -2.0;
    CHECK(ImageFrame::clamped(g)(0, 0) == 0.0);
}

TEST_CASE("reflect index") {
    CHECK(reflect_index(-1, 5) == 0);
    CHECK(reflect_index(-2, 5) == 1);
    CHECK(reflect_index(5, 5) == 4);
    CHECK(reflect_index(6, 5) == 3);
    CHECK(reflect_index(7, 1) == 0);
}

TEST_CASE("bilinear sampling") {
    Grid<double> g(2, 2);
    g(1, 0) = 1.0;
    g(1, 1) = 1.0;
    CHECK(sample_bilinear(g, 0.25, 0.5) == doctest::Approx(0.25));
    CHECK(sample_bilinear(g, 5.0, -3.0) == doctest::Approx(1.0));
}

TEST_CASE("annotation validation") {
    VesselAnnotation ann;
    CHECK_THROWS_AS(validate_annotation(ann, 10, 10), Error);
    ann.branches.push_back(Polyline{{{1, 1}}});
    CHECK_THROWS_AS(validate_annotation(ann, 10, 10), Error);
    ann.branches[0].points.push_back({9, 9});
    CHECK_NOTHROW(validate_annotation(ann, 10, 10));
    ann.branches[0].points.push_back({10, 9});
    CHECK_THROWS_AS(validate_annotation(ann, 10, 10), Error);
    ann.branches[0].points.back() = {INFINITY, 2};
    CHECK_THROWS_AS(validate_annotation(ann, 10, 10), Error);
}

TEST_CASE("tracker config validation") {
    TrackerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sigma == 5.0);
    CHECK(cfg.n_nearest == 2);
    CHECK(cfg.rho == 3.0);
    CHECK(cfg.daisy.dimension() == 200);
    auto broken = [](auto mutate) {
        TrackerConfig c;
        mutate(c);
        return c;
    };
    CHECK_THROWS_AS(broken([](TrackerConfig& c) { c.sigma = 0.5; }).validate(), Error);
    CHECK_THROWS_AS(broken([](TrackerConfig& c) { c.n_nearest = 0; }).validate(), Error);
    CHECK_THROWS_AS(broken([](TrackerConfig& c) { c.rho = -1; }).validate(), Error);
    CHECK_THROWS_AS(broken([](TrackerConfig& c) { c.max_paths = 0; }).validate(), Error);
    CHECK_THROWS_AS(broken([](TrackerConfig& c) { c.scales = {}; }).validate(), Error);
    CHECK_THROWS_AS(broken([](TrackerConfig& c) { c.scales = {0.2}; }).validate(), Error);
}
