#pragma once

// Small fixtures shared by the test binaries.

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

namespace fixtures {

using vtrack::BinaryMask;
using vtrack::Point;
using vtrack::Polyline;

inline Polyline line(Point a, Point b) {
    Polyline p{{a}};
    for (const Point& q : vtrack::interpolate_segment(a, b)) p.points.push_back(q);
    return p;
}

/// Integer pixel chain from a to b (Bresenham), as a polyline.
inline Polyline pixel_line(Point a, Point b) {
    Polyline p;
    for (auto [x, y] : vtrack::bresenham(a, b)) p.points.push_back({double(x), double(y)});
    return p;
}

inline void draw(BinaryMask& m, Point a, Point b) { vtrack::rasterize(Polyline{{a, b}}, m); }

inline int components(const BinaryMask& m) {
    std::vector<int> label(m.size(), -1);
    int count = 0;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y) || label[std::size_t(y) * m.width() + x] >= 0) continue;
            std::vector<std::pair<int, int>> stack{{x, y}};
            label[std::size_t(y) * m.width() + x] = count;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (!m.contains(nx, ny) || !m(nx, ny)) continue;
                        auto& l = label[std::size_t(ny) * m.width() + nx];
                        if (l >= 0) continue;
                        l = count;
                        stack.push_back({nx, ny});
                    }
            }
            ++count;
        }
    return count;
}

/// Distance from q to the segment ab.
inline double segment_distance(Point q, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double l2 = vx * vx + vy * vy;
    double t = l2 > 0 ? ((q.x - a.x) * vx + (q.y - a.y) * vy) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(q.x - a.x - t * vx, q.y - a.y - t * vy);
}

/// Smooth random texture in [0.2, 0.8].
inline vtrack::ImageFrame texture(int w, int h, unsigned seed, int blur = 3) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    vtrack::Grid<double> g(w, h);
    for (double& v : g.values()) v = u(rng);
    // Box blur repeated: cheap and independent of the library filters.
    for (int pass = 0; pass < 3; ++pass) {
        vtrack::Grid<double> out(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double s = 0;
                int n = 0;
                for (int dy = -blur; dy <= blur; ++dy)
                    for (int dx = -blur; dx <= blur; ++dx) {
                        const int xx = std::clamp(x + dx, 0, w - 1), yy = std::clamp(y + dy, 0, h - 1);
                        s += g(xx, yy);
                        ++n;
                    }
                out(x, y) = s / n;
            }
        g = std::move(out);
    }
    double lo = 1, hi = 0;
    for (double v : g.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double& v : g.values()) v = 0.2 + 0.6 * (v - lo) / (hi - lo);
    return vtrack::ImageFrame(std::move(g));
}

}  // namespace fixtures
