#include "vtrack/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace vtrack {

double arclength(const Polyline& p) {
    double total = 0.0;
    for (std::size_t i = 1; i < p.points.size(); ++i) total += distance(p.points[i - 1], p.points[i]);
    return total;
}

Polyline resample_polyline(const Polyline& p, double spacing) {
    if (!(spacing > 0.0)) throw Error("resample spacing must be positive");
    if (p.points.size() < 2) return p;
    const double length = arclength(p);
    const long segments = std::max(1L, std::lround(length / spacing));
    if (segments == 1 || length <= 0.0) return Polyline{{p.front(), p.back()}};

    const double step = length / static_cast<double>(segments);
    Polyline out;
    out.points.reserve(static_cast<std::size_t>(segments) + 1);
    out.points.push_back(p.front());

    std::size_t seg = 1;
    double seg_start = 0.0;  // arc length at p.points[seg - 1]
    for (long k = 1; k < segments; ++k) {
        const double target = step * static_cast<double>(k);
        double seg_len = distance(p.points[seg - 1], p.points[seg]);
        while (seg + 1 < p.points.size() && seg_start + seg_len < target) {
            seg_start += seg_len;
            ++seg;
            seg_len = distance(p.points[seg - 1], p.points[seg]);
        }
        const double t = seg_len > 0.0 ? std::clamp((target - seg_start) / seg_len, 0.0, 1.0) : 0.0;
        const Point a = p.points[seg - 1];
        const Point b = p.points[seg];
        out.points.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    out.points.push_back(p.back());
    return out;
}

bool is_pixel_chain(const Polyline& p, double max_step) {
    if (p.points.size() < 2) return false;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        if (!std::isfinite(p.points[i].x) || !std::isfinite(p.points[i].y)) return false;
        if (i == 0) continue;
        const double step = chebyshev(p.points[i - 1], p.points[i]);
        if (step == 0.0 || step > max_step) return false;
    }
    return true;
}

double min_vertex_distance(const Polyline& p, Point q) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& v : p.points) best = std::min(best, distance(v, q));
    return best;
}

Polyline reversed(const Polyline& p) {
    Polyline r = p;
    std::reverse(r.points.begin(), r.points.end());
    return r;
}

std::vector<std::pair<int, int>> bresenham(Point a, Point b) {
    int x0 = static_cast<int>(std::lround(a.x));
    int y0 = static_cast<int>(std::lround(a.y));
    const int x1 = static_cast<int>(std::lround(b.x));
    const int y1 = static_cast<int>(std::lround(b.y));
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    std::vector<std::pair<int, int>> out;
    for (;;) {
        out.emplace_back(x0, y0);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
    }
    return out;
}

void rasterize(const Polyline& p, BinaryMask& mask) {
    auto put = [&](int x, int y) {
        if (mask.contains(x, y)) mask(x, y) = 1;
    };
    if (p.points.size() == 1) {
        put(static_cast<int>(std::lround(p.front().x)), static_cast<int>(std::lround(p.front().y)));
        return;
    }
    for (std::size_t i = 1; i < p.points.size(); ++i) {
        for (auto [x, y] : bresenham(p.points[i - 1], p.points[i])) put(x, y);
    }
}

std::vector<Point> interpolate_segment(Point a, Point b) {
    const double len = chebyshev(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len)));
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    out.back() = b;
    return out;
}

void validate_annotation(const VesselAnnotation& ann, int width, int height) {
    if (ann.branches.empty()) throw Error("annotation has no branches");
    for (std::size_t b = 0; b < ann.branches.size(); ++b) {
        const auto& pts = ann.branches[b].points;
        if (pts.size() < 2) throw Error("branch " + std::to_string(b) + " has fewer than 2 points");
        for (const Point& q : pts) {
            if (!std::isfinite(q.x) || !std::isfinite(q.y))
                throw Error("branch " + std::to_string(b) + " has a non-finite point");
            if (q.x < 0.0 || q.y < 0.0 || q.x > width - 1 || q.y > height - 1)
                throw Error("branch " + std::to_string(b) + " has a point outside the " +
                            std::to_string(width) + "x" + std::to_string(height) + " frame");
        }
    }
}

}  // namespace vtrack
