#pragma once

#include <cmath>
#include <vector>

#include "vtrack/image.hpp"

namespace vtrack {

/// Sub-pixel location; x is the column, y the row.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double chebyshev(Point a, Point b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Ordered open curve. Traversal order is meaningful (start -> end).
struct Polyline {
    std::vector<Point> points;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    const Point& front() const { return points.front(); }
    const Point& back() const { return points.back(); }

    friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// One annotated frame: a list of branches.
struct VesselAnnotation {
    int frame_index = 0;
    std::vector<Polyline> branches;

    friend bool operator==(const VesselAnnotation&, const VesselAnnotation&) = default;
};

/// Sum of consecutive Euclidean distances.
double arclength(const Polyline& p);

/// Resample at (approximately) uniform arc-length spacing. Endpoints are kept
/// exactly; the interior spacing is arclength / round(arclength / spacing).
Polyline resample_polyline(const Polyline& p, double spacing);

/// True when the polyline is a valid pixel chain: >= 2 points, finite,
/// consecutive points distinct and within Chebyshev distance `max_step`.
bool is_pixel_chain(const Polyline& p, double max_step = 2.0);

/// Minimum distance from `q` to any vertex of `p`.
double min_vertex_distance(const Polyline& p, Point q);

/// Reversed copy.
Polyline reversed(const Polyline& p);

/// Integer pixel chain between two points (Bresenham on rounded coordinates).
std::vector<std::pair<int, int>> bresenham(Point a, Point b);

/// Sets every pixel the polyline passes through (Bresenham between vertices).
void rasterize(const Polyline& p, BinaryMask& mask);

/// Straight-line points from a (exclusive) to b (inclusive), step <= 1 px.
std::vector<Point> interpolate_segment(Point a, Point b);

/// Throws vtrack::Error when an annotation is unusable on a frame of the given
/// size: no branches, a branch with < 2 points, non-finite or out-of-frame points.
void validate_annotation(const VesselAnnotation& ann, int width, int height);

}  // namespace vtrack
