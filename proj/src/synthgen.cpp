#include "vtrack/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace vtrack::synthgen {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    // Explicit mapping keeps the sequence identical across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * u;
}

Polyline catmull_rom(const std::vector<Point>& ctrl) {
    Polyline dense;
    const std::size_t n = ctrl.size();
    auto at = [&](long i) {
        if (i < 0) return 2.0 * ctrl[0] - ctrl[1];
        if (i >= static_cast<long>(n)) return 2.0 * ctrl[n - 1] - ctrl[n - 2];
        return ctrl[static_cast<std::size_t>(i)];
    };
    constexpr int steps = 64;
    dense.points.push_back(ctrl.front());
    for (long i = 0; i + 1 < static_cast<long>(n); ++i) {
        const Point p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
        for (int s = 1; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            const double t2 = t * t, t3 = t2 * t;
            auto coord = [&](double a, double b, double c, double d) {
                return 0.5 * (2.0 * b + (-a + c) * t + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2 + (-a + 3.0 * b - 3.0 * c + d) * t3);
            };
            dense.points.push_back({coord(p0.x, p1.x, p2.x, p3.x), coord(p0.y, p1.y, p2.y, p3.y)});
        }
        dense.points.back() = ctrl[static_cast<std::size_t>(i + 1)];
    }
    return resample_polyline(dense, 1.0);
}

bool inside(const Polyline& p, double margin, const SynthParams& params) {
    return std::all_of(p.points.begin(), p.points.end(), [&](const Point& q) {
        return q.x >= margin && q.y >= margin && q.x <= params.width - 1 - margin && q.y <= params.height - 1 - margin;
    });
}

double segment_distance(Point p, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

struct MotionPhases {
    double theta0, phase1, phase2;
};

MotionPhases phases(const SynthParams& params) {
    std::mt19937_64 rng(splitmix64(params.seed ^ 0xA5A5A5A5ULL));
    return {uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi), uniform(rng, 0.0, kTwoPi)};
}

}  // namespace

VesselAnnotation gen_tree(const SynthParams& params) {
    if (params.depth < 1 || params.branch_count < 1) throw Error("tree needs depth >= 1 and at least one branch");
    if (params.width < 64 || params.height < 64) throw Error("synthetic frames must be at least 64x64");
    std::mt19937_64 rng(splitmix64(params.seed));
    const double w = params.width, h = params.height;
    const double margin = 0.08 * std::min(w, h);

    VesselAnnotation tree;
    std::vector<int> level;

    // Trunk: across the frame with a gentle lateral wiggle.
    for (int attempt = 0; tree.branches.empty(); ++attempt) {
        if (attempt > 1000) throw Error("could not place the trunk");
        const double angle = uniform(rng, -0.6, 0.6) + (uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : std::numbers::pi / 2);
        const Point c{w / 2 + uniform(rng, -0.05, 0.05) * w, h / 2 + uniform(rng, -0.05, 0.05) * h};
        const double half = 0.36 * std::min(w, h);
        const Point dir{std::cos(angle), std::sin(angle)};
        const Point nrm{-dir.y, dir.x};
        std::vector<Point> ctrl;
        for (int k = 0; k < 5; ++k) {
            const double s = -half + 2.0 * half * k / 4.0;
            const double off = (k == 0 || k == 4) ? 0.0 : uniform(rng, -0.06, 0.06) * std::min(w, h);
            ctrl.push_back(c + s * dir + off * nrm);
        }
        Polyline trunk = catmull_rom(ctrl);
        if (inside(trunk, margin, params)) {
            tree.branches.push_back(std::move(trunk));
            level.push_back(0);
        }
    }

    for (int b = 1; b < params.branch_count; ++b) {
        bool placed = false;
        for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
            std::vector<int> parents;
            for (std::size_t i = 0; i < tree.branches.size(); ++i)
                if (level[i] + 1 < params.depth) parents.push_back(static_cast<int>(i));
            if (parents.empty()) throw Error("tree depth too small for the requested branch count");
            const int parent = parents[static_cast<std::size_t>(uniform(rng, 0.0, 1.0) * parents.size()) % parents.size()];
            const Polyline& pp = tree.branches[static_cast<std::size_t>(parent)];
            const std::size_t np = pp.size();
            const auto at = static_cast<std::size_t>(uniform(rng, 0.25, 0.75) * static_cast<double>(np - 1));
            const Point origin = pp.points[at];
            const Point tangent = pp.points[std::min(at + 3, np - 1)] - pp.points[at >= 3 ? at - 3 : 0];
            const double tangle = std::atan2(tangent.y, tangent.x);
            const double side = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            const double angle = tangle + side * uniform(rng, 0.6, 1.05);
            const double length = uniform(rng, 0.25, 0.38) * std::min(w, h);
            const Point dir{std::cos(angle), std::sin(angle)};
            const Point nrm{-dir.y, dir.x};
            std::vector<Point> ctrl{origin};
            for (int k = 1; k <= 3; ++k) {
                const double off = uniform(rng, -0.04, 0.04) * std::min(w, h);
                ctrl.push_back(origin + (length * k / 3.0) * dir + (k == 1 ? 0.3 * off : off) * nrm);
            }
            Polyline child = catmull_rom(ctrl);
            if (!inside(child, margin, params)) continue;
            // Keep clear of every other branch except where the child leaves its parent.
            bool clear = true;
            for (std::size_t i = 0; i < tree.branches.size() && clear; ++i) {
                for (std::size_t k = 0; k < child.size() && clear; ++k) {
                    const double d = min_vertex_distance(tree.branches[i], child.points[k]);
                    const double arc = static_cast<double>(k);
                    if (static_cast<int>(i) == parent) {
                        if (arc > 25.0 && d < 0.5 * arc && d < 30.0) clear = false;
                    } else if (d < 30.0) {
                        clear = false;
                    }
                }
            }
            if (!clear) continue;
            child.points.front() = origin;
            tree.branches.push_back(std::move(child));
            level.push_back(level[static_cast<std::size_t>(parent)] + 1);
            placed = true;
        }
        if (!placed) throw Error("could not place branch " + std::to_string(b));
    }
    return tree;
}

Point motion_at(Point p, int t, const SynthParams& params) {
    if (params.frames_per_cycle < 1) throw Error("frames_per_cycle must be >= 1");
    const int phase_t = ((t % params.frames_per_cycle) + params.frames_per_cycle) % params.frames_per_cycle;
    if (phase_t == 0) return {0.0, 0.0};
    const MotionPhases ph = phases(params);
    const double temporal = std::sin(kTwoPi * phase_t / params.frames_per_cycle);
    const double u = p.x / params.width;
    const double v = p.y / params.height;
    const double theta = ph.theta0 + 0.5 * std::sin(kTwoPi * u + ph.phase1);
    const double mag = 0.875 + 0.125 * std::cos(kTwoPi * (u + v) + ph.phase2);
    const double s = params.amplitude * temporal * mag;
    return {s * std::cos(theta), s * std::sin(theta)};
}

VesselAnnotation deform_tree(const VesselAnnotation& tree, int t, const SynthParams& params) {
    if (t < 0) throw Error("frame index must be >= 0");
    VesselAnnotation out;
    out.frame_index = t;
    for (const auto& b : tree.branches) {
        Polyline moved;
        moved.points.reserve(b.size());
        for (const Point& p : b.points) moved.points.push_back(p + motion_at(p, t, params));
        out.branches.push_back(std::move(moved));
    }
    return out;
}

Grid<double> render_tubes(const VesselAnnotation& ann, const SynthParams& params) {
    const int w = params.width, h = params.height;
    Grid<double> dmin(w, h, std::numeric_limits<double>::infinity());
    const int reach = static_cast<int>(std::ceil(4.0 * params.tube_width)) + 1;
    for (const auto& b : ann.branches) {
        for (std::size_t i = 0; i + 1 < b.size() || (b.size() == 1 && i == 0); ++i) {
            const Point a = b.points[i];
            const Point c = b.size() == 1 ? a : b.points[i + 1];
            const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, c.x))) - reach);
            const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(a.x, c.x))) + reach);
            const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, c.y))) - reach);
            const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(a.y, c.y))) + reach);
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x) {
                    const double d = segment_distance({static_cast<double>(x), static_cast<double>(y)}, a, c);
                    if (d < dmin(x, y)) dmin(x, y) = d;
                }
            if (b.size() == 1) break;
        }
    }
    Grid<double> img(w, h);
    const double s2 = 2.0 * params.tube_width * params.tube_width;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double base = params.background + params.background_gradient * (static_cast<double>(x) / w - 0.5);
            const double d = dmin(x, y);
            img(x, y) = base - (std::isfinite(d) ? params.contrast * std::exp(-d * d / s2) : 0.0);
        }
    return img;
}

Sequence render_sequence(const VesselAnnotation& tree, const SynthParams& params) {
    if (params.frame_count < 1) throw Error("frame_count must be >= 1");
    Sequence seq;
    for (int t = 0; t < params.frame_count; ++t) {
        VesselAnnotation truth = deform_tree(tree, t, params);
        Grid<double> img = render_tubes(truth, params);
        if (params.noise_std > 0.0) {
            std::mt19937_64 rng(splitmix64(params.seed * 0x100000001B3ULL + static_cast<std::uint64_t>(t) + 1));
            std::normal_distribution<double> noise(0.0, params.noise_std);
            for (double& v : img.values()) v += noise(rng);
        }
        seq.frames.push_back(ImageFrame::clamped(std::move(img)));
        seq.truth.push_back(std::move(truth));
    }
    return seq;
}

ImageFrame straight_tube(int width, int height, Point a, Point b, double tube_width, double contrast, double noise_std,
                         std::uint64_t seed) {
    SynthParams p;
    p.width = width;
    p.height = height;
    p.tube_width = tube_width;
    p.contrast = contrast;
    VesselAnnotation ann;
    ann.branches.push_back(Polyline{{a, b}});
    Grid<double> img = render_tubes(ann, p);
    if (noise_std > 0.0) {
        std::mt19937_64 rng(splitmix64(seed));
        std::normal_distribution<double> noise(0.0, noise_std);
        for (double& v : img.values()) v += noise(rng);
    }
    return ImageFrame::clamped(std::move(img));
}

}  // namespace vtrack::synthgen
