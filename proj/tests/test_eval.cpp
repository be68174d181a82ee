#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"
#include "vtrack/eval.hpp"

using namespace vtrack;
using namespace vtrack::eval;

namespace {

VesselAnnotation single(Polyline p) { return VesselAnnotation{0, {std::move(p)}}; }

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("metric formulas") {
    auto m = metrics({9, 1, 1});
    CHECK(m.prec == doctest::Approx(0.9));
    CHECK(m.sens == doctest::Approx(0.9));
    CHECK(m.f1 == doctest::Approx(0.9));
    m = metrics({0, 3, 4});
    CHECK(m.prec == 0.0);
    CHECK(m.sens == 0.0);
    CHECK(m.f1 == 0.0);
    m = metrics({8, 2, 0});
    CHECK(m.prec == doctest::Approx(0.8));
    CHECK(m.sens == doctest::Approx(1.0));
    CHECK(m.f1 == doctest::Approx(8.0 / 9.0));
    m = metrics({0, 0, 0});
    CHECK(m.f1 == 0.0);
}

TEST_CASE("identical annotations match fully") {
    const auto gt = single(Polyline{{{10, 10}, {40, 25}, {60, 20}}});
    for (double rho : {0.0, 1.0, 3.0}) {
        const auto c = match_counts(gt, gt, rho);
        CHECK(c.fp == 0);
        CHECK(c.fn == 0);
        CHECK(c.tp > 0);
    }
}

TEST_CASE("shifted vertical line") {
    const auto gt = single(Polyline{{{20, 10}, {20, 60}}});
    const auto pred = single(Polyline{{{22, 10}, {22, 60}}});
    const auto wide = match_counts(pred, gt, 3.0);
    CHECK(wide.fp == 0);
    CHECK(wide.fn == 0);
    const auto narrow = match_counts(pred, gt, 1.0);
    CHECK(narrow.fp == 51);
    CHECK(narrow.fn == 51);
    CHECK(narrow.tp == 0);
}

TEST_CASE("prediction twice as long as the truth") {
    const auto gt = single(Polyline{{{10, 30}, {60, 30}}});
    const auto pred = single(Polyline{{{10, 30}, {110, 30}}});
    const auto c = match_counts(pred, gt, 3.0);
    const double total = double(c.tp + c.fp);
    CHECK(std::abs(c.fp / total - 0.5) <= 0.05);
    CHECK(c.fn == 0);
}

TEST_CASE("empty sides") {
    const auto gt = single(Polyline{{{0, 0}, {10, 0}}});
    const auto c = match_counts(VesselAnnotation{}, gt, 3.0);
    CHECK(c.tp == 0);
    CHECK(c.fp == 0);
    CHECK(c.fn == 11);
    const auto d = match_counts(gt, VesselAnnotation{}, 3.0);
    CHECK(d.fp == 11);
    CHECK(d.tp == 0);
    CHECK(d.fn == 0);
    CHECK_THROWS_AS(match_counts(gt, gt, -1.0), Error);
}

TEST_CASE("swapping prediction and truth swaps fp and fn") {
    const auto a = single(Polyline{{{10, 10}, {80, 10}}});
    const auto b = single(Polyline{{{10, 12}, {40, 12}, {40, 50}}});
    const auto ab = match_counts(a, b, 3.0);
    const auto ba = match_counts(b, a, 3.0);
    CHECK(ab.fp != ab.fn);
    CHECK(ab.fp == ba.fn);
    CHECK(ab.fn == ba.fp);
}

TEST_CASE("metrics are monotone in rho and f1 is a harmonic mean") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 60.0);
    for (int trial = 0; trial < 100; ++trial) {
        VesselAnnotation pred, gt;
        for (int k = 0; k < 2; ++k) {
            pred.branches.push_back(Polyline{{{u(rng), u(rng)}, {u(rng), u(rng)}}});
            gt.branches.push_back(Polyline{{{u(rng), u(rng)}, {u(rng), u(rng)}}});
        }
        MetricTriple prev = metrics(match_counts(pred, gt, 0.0));
        for (double rho : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
            const MetricTriple m = metrics(match_counts(pred, gt, rho));
            CHECK(m.prec >= prev.prec);
            CHECK(m.sens >= prev.sens);
            CHECK(m.f1 >= std::min(m.prec, m.sens) - 1e-12);
            CHECK(m.f1 <= std::max(m.prec, m.sens) + 1e-12);
            prev = m;
        }
    }
}

TEST_CASE("aggregation") {
    const auto one = aggregate({{"a", 1, {0.7, 0.8, 0.75}}});
    CHECK(one.f1.mean == doctest::Approx(0.75));
    CHECK(one.f1.std == 0.0);

    const auto two = aggregate({{"a", 1, {1, 1, 0.8}}, {"a", 2, {1, 1, 1.0}}});
    CHECK(two.f1.mean == doctest::Approx(0.9));
    CHECK(two.f1.std == doctest::Approx(0.1));

    // Three sequences with 3, 4 and 1 tracked frames.
    std::vector<FrameScore> s{
        {"a", 1, {0, 0, 0.1}}, {"a", 2, {0, 0, 0.2}}, {"a", 3, {0, 0, 0.3}},
        {"b", 1, {0, 0, 0.4}}, {"b", 2, {0, 0, 0.5}}, {"b", 3, {0, 0, 0.6}}, {"b", 4, {0, 0, 0.7}},
        {"c", 1, {0, 0, 0.9}},
    };
    const auto r = aggregate(s);
    CHECK(r.sequences == 3);
    CHECK(r.frames == 8);
    CHECK(r.first_f1 == doctest::Approx((0.1 + 0.4 + 0.9) / 3));
    CHECK(r.middle_f1 == doctest::Approx((0.2 + 0.5 + 0.9) / 3));
    CHECK(r.last_f1 == doctest::Approx((0.3 + 0.7 + 0.9) / 3));
    CHECK_THROWS_AS(aggregate({}), Error);
}

TEST_CASE("metrics table layout") {
    std::vector<FrameScore> s;
    for (int f = 1; f <= 11; ++f) s.push_back({"seq", f, {1.0, 0.9, 0.95}});
    std::ostringstream out;
    write_table(out, s, aggregate(s));
    const std::string text = out.str();
    CHECK(text.rfind("sequence,frame,prec,sens,f1\n", 0) == 0);
    std::istringstream lines(text);
    std::string line;
    int rows = 0;
    std::getline(lines, line);
    while (std::getline(lines, line) && !line.empty()) ++rows;
    CHECK(rows == 11);
    CHECK(text.find("f1,0.9500,0.0000") != std::string::npos);
    CHECK(text.find("first,middle,last") != std::string::npos);
    CHECK(count_lines(text) > 11);
}
