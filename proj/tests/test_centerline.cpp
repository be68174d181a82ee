#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "vtrack/centerline.hpp"
#include "vtrack/synthgen.hpp"
#include "vtrack/vesselgraph.hpp"

using namespace vtrack;
using namespace vtrack::centerline;

namespace {

BinaryMask full(int w, int h) { return BinaryMask(w, h, 1); }

/// Fraction of 1-px samples along ab that have a skeleton pixel within 1 px.
double axis_coverage(const BinaryMask& skel, Point a, Point b) {
    const Polyline axis = resample_polyline(Polyline{{a, b}}, 1.0);
    int hit = 0;
    for (const Point& q : axis.points) {
        bool near = false;
        for (int y = int(q.y) - 2; y <= int(q.y) + 2 && !near; ++y)
            for (int x = int(q.x) - 2; x <= int(q.x) + 2 && !near; ++x)
                near = skel.contains(x, y) && skel(x, y) && std::hypot(x - q.x, y - q.y) <= 1.0;
        hit += near ? 1 : 0;
    }
    return double(hit) / double(axis.size());
}

}  // namespace

TEST_CASE("constant image has no response") {
    const ImageFrame f(Grid<double>(40, 30, 0.6));
    const auto r = vesselness(f, {1, 2, 3, 4});
    for (double v : r.response.values()) CHECK(v == 0.0);
    CHECK(count_set(extract_centerline(r, full(40, 30))) == 0);
}

TEST_CASE("horizontal tube response and orientation") {
    const auto f = synthgen::straight_tube(128, 64, {10, 32}, {118, 32}, 2.0, 0.35);
    const auto r = vesselness(f, {1, 2, 3, 4});
    int strong = 0, aligned = 0, total = 0;
    for (int x = 10; x <= 118; ++x) {
        ++total;
        strong += r.response(x, 32) >= 0.5 ? 1 : 0;
        const double t = r.orientation(x, 32);
        const double off = std::min(t, std::numbers::pi - t);
        aligned += off <= 10.0 * std::numbers::pi / 180.0 ? 1 : 0;
    }
    CHECK(double(strong) / total >= 0.9);
    CHECK(double(aligned) / total >= 0.9);
    for (double t : r.orientation.values()) {
        CHECK(t >= 0.0);
        CHECK(t < std::numbers::pi);
    }
}

TEST_CASE("crossing tubes respond on both") {
    synthgen::SynthParams p;
    p.width = p.height = 96;
    VesselAnnotation x{0, {Polyline{{{10, 48}, {86, 48}}}, Polyline{{{48, 10}, {48, 86}}}}};
    const ImageFrame f = ImageFrame::clamped(synthgen::render_tubes(x, p));
    const auto r = vesselness(f, {1, 2, 3, 4});
    CHECK(r.response(20, 48) >= 0.5);
    CHECK(r.response(48, 20) >= 0.5);
}

TEST_CASE("straight tube centerline lies on the axis") {
    const Point a{12, 40.3}, b{150, 71.8};
    for (double noise : {0.0, 0.05}) {
        const auto f = synthgen::straight_tube(160, 110, a, b, 2.0, 0.35, noise, 4);
        const auto r = vesselness(f, {1, 2, 3, 4});
        const auto skel = extract_centerline(r, full(160, 110));
        CHECK(axis_coverage(skel, a, b) >= (noise == 0.0 ? 0.95 : 0.9));
        int near_axis = 0, total = 0;
        for (int y = 0; y < 110; ++y)
            for (int x = 0; x < 160; ++x)
                if (skel(x, y)) {
                    ++total;
                    near_axis += fixtures::segment_distance({double(x), double(y)}, a, b) <= 1.0 ? 1 : 0;
                }
        if (noise == 0.0) CHECK(double(near_axis) / total >= 0.95);
    }
}

TEST_CASE("skeleton is clipped to the range") {
    const auto f = synthgen::straight_tube(120, 60, {5, 30}, {115, 30}, 2.0, 0.35);
    const auto r = vesselness(f, {1, 2, 3, 4});
    BinaryMask left(120, 60, 0);
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 60; ++x) left(x, y) = 1;
    const auto skel = extract_centerline(r, left, 0.1);
    CHECK(count_set(skel) > 40);
    for (int y = 0; y < 60; ++y)
        for (int x = 60; x < 120; ++x) CHECK_FALSE(skel(x, y));
}

TEST_CASE("zero response gives an empty skeleton") {
    RidgeResponse r{Grid<double>(20, 20, 0.0), Grid<double>(20, 20, 0.0), Grid<double>(20, 20, 1.0)};
    CHECK(count_set(extract_centerline(r, full(20, 20), 0.0)) == 0);
    CHECK(auto_threshold(r, full(20, 20)) == doctest::Approx(0.05));
}

TEST_CASE("skeleton is one pixel wide away from junctions") {
    synthgen::SynthParams p;
    p.width = p.height = 256;
    p.noise_std = 0.0;
    p.seed = 3;
    const auto tree = synthgen::gen_tree(p);
    const ImageFrame f = ImageFrame::clamped(synthgen::render_tubes(tree, p));
    const auto r = vesselness(f, {1, 2, 3, 4});
    const auto skel = extract_centerline(r, full(256, 256));
    const auto junctions = vesselgraph::detect_junctions(skel);
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x) {
            if (!skel(x, y) || neighbor_count(skel, x, y) < 3) continue;
            bool at_junction = false;
            for (const Point& j : junctions) at_junction |= chebyshev(j, {double(x), double(y)}) <= 2.0;
            CHECK(at_junction);
        }
}

TEST_CASE("larger range keeps the sub-range skeleton") {
    const auto f = synthgen::straight_tube(140, 90, {10, 20.5}, {130, 70.2}, 2.0, 0.35, 0.03, 8);
    const auto r = vesselness(f, {1, 2, 3, 4});
    BinaryMask sub(140, 90, 0);
    for (int y = 0; y < 90; ++y)
        for (int x = 30; x < 100; ++x) sub(x, y) = 1;
    const auto whole = extract_centerline(r, full(140, 90), 0.2);
    const auto part = extract_centerline(r, sub, 0.2);
    int missing = 0, total = 0;
    for (int y = 0; y < 90; ++y)
        for (int x = 0; x < 140; ++x)
            if (part(x, y)) {
                ++total;
                missing += whole(x, y) ? 0 : 1;
            }
    CHECK(total > 50);
    CHECK(missing == 0);
}

TEST_CASE("response is invariant under affine intensity change") {
    const auto f = synthgen::straight_tube(80, 80, {5, 10}, {75, 66}, 2.0, 0.35, 0.05, 2);
    Grid<double> g = f.pixels();
    for (double& v : g.values()) v = 0.5 * v + 0.2;
    const auto a = vesselness(f, {1, 2, 3, 4});
    const auto b = vesselness(ImageFrame(g), {1, 2, 3, 4});
    double worst = 0.0;
    for (std::size_t i = 0; i < a.response.size(); ++i)
        worst = std::max(worst, std::abs(a.response.values()[i] - b.response.values()[i]));
    CHECK(worst <= 1e-3);
}

TEST_CASE("thinning a thick bar") {
    BinaryMask m(30, 12, 0);
    for (int y = 4; y <= 6; ++y)
        for (int x = 3; x <= 26; ++x) m(x, y) = 1;
    const auto t = thin(m);
    CHECK(fixtures::components(t) == 1);
    for (int x = 6; x <= 23; ++x) {
        int column = 0;
        for (int y = 0; y < 12; ++y) column += t(x, y);
        CHECK(column == 1);
    }
    const auto again = thin(t);
    CHECK(again == t);
}

TEST_CASE("vesselness rejects bad scales") {
    const ImageFrame f(Grid<double>(10, 10, 0.5));
    CHECK_THROWS_AS(vesselness(f, {}), Error);
    CHECK_THROWS_AS(vesselness(f, {0.25}), Error);
}
