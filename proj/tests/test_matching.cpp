#include <doctest.h>

#include <cmath>
#include <random>

#include "dtw_oracle.hpp"
#include "support.hpp"
#include "vtrack/matching.hpp"
#include "vtrack/synthgen.hpp"

using namespace vtrack;
using namespace vtrack::matching;

namespace {

double path_cost(const CostMatrix& d, const WarpingPath& p) {
    double s = 0.0;
    for (auto [i, j] : p) s += d(i, j);
    return s;
}

CostMatrix random_matrix(std::mt19937& rng, std::size_t m, std::size_t l) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    CostMatrix d(m, l);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < l; ++j) d(i, j) = u(rng);
    return d;
}

ImageFrame step_edge() {
    Grid<double> g(160, 80, 0.8);
    for (int y = 0; y < 80; ++y)
        for (int x = 100; x < 160; ++x) g(x, y) = 0.3;
    return ImageFrame(g);
}

}  // namespace

TEST_CASE("descriptor of a constant image is uniform") {
    const ImageFrame f(Grid<double>(64, 64, 0.5));
    const auto d = descriptor(f, {32, 32});
    REQUIRE(d.size() == 200);
    for (double v : d) CHECK(v == doctest::Approx(1.0 / std::sqrt(8.0)));
}

TEST_CASE("descriptor blocks have unit norm and are deterministic") {
    const auto f = fixtures::texture(96, 96, 12);
    const auto a = descriptor(f, {40.5, 51.25});
    CHECK(a == descriptor(f, {40.5, 51.25}));
    for (std::size_t b = 0; b < 25; ++b) {
        double n = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(a[b * 8 + k] >= 0.0);
            n += a[b * 8 + k] * a[b * 8 + k];
        }
        CHECK(std::sqrt(n) == doctest::Approx(1.0).epsilon(1e-6));
    }
    // Near the border the frame is mirrored.
    CHECK(descriptor(f, {0, 0}).size() == 200);
}

TEST_CASE("field values do not depend on the region size") {
    const auto f = fixtures::texture(96, 96, 13);
    const DaisyField small(f, {}, Region{30, 30, 50, 50});
    const DaisyField large(f, {}, Region{0, 0, 95, 95});
    CHECK(small.at({40, 41}) == large.at({40, 41}));
    CHECK_THROWS_AS(small.at({70, 70}), Error);
}

TEST_CASE("descriptors separate the sides of a step edge") {
    const auto f = step_edge();
    const double across = euclidean(descriptor(f, {96, 40}), descriptor(f, {104, 40}));
    const double same_side = euclidean(descriptor(f, {30, 40}), descriptor(f, {34, 40}));
    CHECK(across > same_side);
}

TEST_CASE("cost matrix contracts") {
    const auto f = fixtures::texture(96, 96, 14);
    const Polyline guided = fixtures::line({20, 30}, {60, 55});
    const auto same = cost_matrix(f, f, guided, guided);
    REQUIRE(same.rows() == guided.size());
    for (std::size_t i = 0; i < same.rows(); ++i) CHECK(same(i, i) == 0.0);

    const ImageFrame flat(Grid<double>(64, 64, 0.4));
    const auto zero = cost_matrix(flat, flat, fixtures::line({10, 10}, {20, 10}), fixtures::line({30, 40}, {40, 44}));
    for (std::size_t i = 0; i < zero.rows(); ++i)
        for (std::size_t j = 0; j < zero.cols(); ++j) CHECK(zero(i, j) == doctest::Approx(0.0));

    const auto shape = cost_matrix(f, f, fixtures::line({10, 10}, {14, 10}), fixtures::line({30, 30}, {36, 30}));
    CHECK(shape.rows() == 5);
    CHECK(shape.cols() == 7);
    CHECK_THROWS_AS(CostMatrix::from_rows({{1, 2}, {3}}), Error);
    CHECK_THROWS_AS(CostMatrix::from_rows({{1, -2}}), Error);
}

TEST_CASE("dtw fixtures") {
    const auto r = dtw(CostMatrix::from_rows({{0, 2}, {3, 1}}));
    CHECK(r.distance == 1.0);
    CHECK(r.path == WarpingPath{{0, 0}, {1, 1}});

    for (auto [m, l] : {std::pair<std::size_t, std::size_t>{4, 7}, {7, 4}, {5, 5}}) {
        const auto z = dtw(CostMatrix(m, l, 0.0));
        CHECK(z.distance == 0.0);
        CHECK(z.path.size() == std::max(m, l));
        CHECK(is_valid_warping_path(z.path, m, l));
    }

    const auto row = CostMatrix::from_rows({{1.5, 2, 0.25, 4}});
    CHECK(dtw(row).distance == 7.75);
    CHECK(dtw(row.transposed()).distance == 7.75);
}

TEST_CASE("dtw equals exhaustive minimum") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        const auto d = random_matrix(rng, size(rng), size(rng));
        const auto r = dtw(d);
        CHECK(r.distance == doctest::Approx(fixtures::brute_force_dtw(d)).epsilon(1e-12));
        CHECK(is_valid_warping_path(r.path, d.rows(), d.cols()));
        CHECK(path_cost(d, r.path) == doctest::Approx(r.distance).epsilon(1e-12));
        CHECK(dtw(d.transposed()).distance == doctest::Approx(r.distance).epsilon(1e-12));
        CostMatrix scaled = d;
        for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = 0; j < d.cols(); ++j) scaled(i, j) = 2.5 * d(i, j);
        CHECK(dtw(scaled).distance == doctest::Approx(2.5 * r.distance).epsilon(1e-12));
    }
}

TEST_CASE("warping path validity") {
    CHECK(is_valid_warping_path({{0, 0}, {0, 1}, {1, 1}}, 2, 2));
    CHECK_FALSE(is_valid_warping_path({{0, 0}, {1, 1}}, 2, 3));
    CHECK_FALSE(is_valid_warping_path({{0, 0}, {0, 2}}, 1, 3));
    CHECK_FALSE(is_valid_warping_path({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 2, 2));
    CHECK_FALSE(is_valid_warping_path({{0, 0}, {0, 0}, {1, 1}}, 2, 2));
}

TEST_CASE("selection on identical frames") {
    const auto f = fixtures::texture(128, 128, 15);
    const Polyline guided = fixtures::line({20, 20}, {70, 40});
    const Polyline far = fixtures::line({60, 100}, {110, 90});
    const std::vector<Polyline> cands{far, guided};
    const auto s = select_branch(f, f, guided, cands);
    CHECK(s.index == 1);
    CHECK(s.distance == 0.0);
    CHECK(s.best == guided);
    CHECK(s.distances.size() == 2);

    const std::vector<Polyline> dup{guided, guided};
    CHECK(select_branch(f, f, guided, dup).index == 0);
    CHECK_THROWS_AS(select_branch(f, f, guided, std::vector<Polyline>{}), Error);
}

TEST_CASE("true branch wins under synthetic motion") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    int wins = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        synthgen::SynthParams p;
        p.seed = 1000 + std::uint64_t(trial);
        p.width = p.height = 256;
        p.frame_count = 4;
        const auto tree = synthgen::gen_tree(p);
        const auto seq = synthgen::render_sequence(tree, p);
        const Polyline& guided = seq.truth[0].branches[0];
        const Polyline& truth = seq.truth[3].branches[0];
        const double a = angle(rng);
        Polyline decoy = truth;
        for (Point& q : decoy.points) q = q + Point{6.0 * std::cos(a), 6.0 * std::sin(a)};
        const bool truth_first = trial % 2 == 0;
        const std::vector<Polyline> cands = truth_first ? std::vector<Polyline>{truth, decoy} : std::vector<Polyline>{decoy, truth};
        const auto s = select_branch(seq.frames[0], seq.frames[3], guided, cands);
        const std::size_t truth_index = truth_first ? 0 : 1;
        wins += s.index == truth_index && s.distances[truth_index] < s.distances[1 - truth_index] ? 1 : 0;
    }
    CHECK(wins >= 95);
}
