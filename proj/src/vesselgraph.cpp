#include "vtrack/vesselgraph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "vtrack/centerline.hpp"

namespace vtrack::vesselgraph {
namespace {

using Pixel = std::pair<int, int>;

// 4-neighbours first so traced chains follow the skeleton rather than cutting corners.
constexpr std::array<Pixel, 8> kSteps{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}};

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

void append_point(Polyline& line, Point p) {
    if (line.points.empty()) {
        line.points.push_back(p);
        return;
    }
    if (line.points.back() == p) return;
    for (const Point& q : interpolate_segment(line.points.back(), p)) {
        if (line.points.back() != q) line.points.push_back(q);
    }
}

}  // namespace

std::vector<Point> detect_junctions(const BinaryMask& skeleton) {
    std::vector<Pixel> pixels;
    for (int y = 0; y < skeleton.height(); ++y)
        for (int x = 0; x < skeleton.width(); ++x)
            if (skeleton(x, y) && centerline::neighbor_count(skeleton, x, y) >= 3) pixels.emplace_back(x, y);

    std::vector<int> parent(pixels.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        for (std::size_t j = i + 1; j < pixels.size(); ++j) {
            if (std::abs(pixels[i].first - pixels[j].first) <= 2 && std::abs(pixels[i].second - pixels[j].second) <= 2) {
                const int a = find_root(parent, static_cast<int>(i));
                const int b = find_root(parent, static_cast<int>(j));
                if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
        }
    }
    std::vector<Point> out;
    std::vector<int> root_to_out(pixels.size(), -1);
    std::vector<int> counts;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const int r = find_root(parent, static_cast<int>(i));
        int& slot = root_to_out[static_cast<std::size_t>(r)];
        if (slot < 0) {
            slot = static_cast<int>(out.size());
            out.push_back({0.0, 0.0});
            counts.push_back(0);
        }
        out[static_cast<std::size_t>(slot)].x += pixels[i].first;
        out[static_cast<std::size_t>(slot)].y += pixels[i].second;
        ++counts[static_cast<std::size_t>(slot)];
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].x /= counts[k];
        out[k].y /= counts[k];
    }
    return out;
}

std::vector<Polyline> split_segments(const BinaryMask& skeleton, const std::vector<Point>& junctions) {
    const int w = skeleton.width();
    const int h = skeleton.height();
    BinaryMask chain = skeleton;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!skeleton(x, y)) continue;
            bool is_junction = false;
            for (const Point& j : junctions) {
                const double d = chebyshev(j, {static_cast<double>(x), static_cast<double>(y)});
                if (d < 0.5 || (d <= 3.0 && centerline::neighbor_count(skeleton, x, y) >= 3)) {
                    is_junction = true;
                    break;
                }
            }
            if (is_junction) chain(x, y) = 0;
        }
    }

    BinaryMask visited(w, h, 0);
    auto open_neighbors = [&](int x, int y) {
        int n = 0;
        for (auto [u, v] : kSteps) {
            const int nx = x + u, ny = y + v;
            if (chain.contains(nx, ny) && chain(nx, ny) && !visited(nx, ny)) ++n;
        }
        return n;
    };
    std::vector<Polyline> segments;
    auto trace = [&](int sx, int sy) {
        Polyline line;
        int x = sx, y = sy;
        for (;;) {
            visited(x, y) = 1;
            line.points.push_back({static_cast<double>(x), static_cast<double>(y)});
            bool moved = false;
            for (auto [u, v] : kSteps) {
                const int nx = x + u, ny = y + v;
                if (chain.contains(nx, ny) && chain(nx, ny) && !visited(nx, ny)) {
                    x = nx;
                    y = ny;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        if (line.size() >= 2) segments.push_back(std::move(line));
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (chain(x, y) && !visited(x, y) && open_neighbors(x, y) <= 1) trace(x, y);
    // Whatever remains lies on closed loops.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (chain(x, y) && !visited(x, y)) trace(x, y);
    return segments;
}

CenterlineGraph build_graph(std::vector<Polyline> segments, std::vector<Point> junctions, double snap_radius) {
    CenterlineGraph g;
    segments.erase(std::remove_if(segments.begin(), segments.end(), [](const Polyline& s) { return s.size() < 2; }),
                   segments.end());
    g.segments = std::move(segments);
    g.junctions = std::move(junctions);
    for (const Point& j : g.junctions) g.nodes.push_back({j, true});

    const std::size_t ends = g.entity_count();
    std::vector<int> node_of(ends, -1);
    auto end_point = [&](std::size_t e) {
        const Polyline& s = g.segments[e / 2];
        return e % 2 == 0 ? s.front() : s.back();
    };
    for (std::size_t e = 0; e < ends; ++e) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g.junctions.size(); ++j) {
            const double d = distance(end_point(e), g.junctions[j]);
            if (d <= snap_radius && d < best) {
                best = d;
                node_of[e] = static_cast<int>(j);
            }
        }
    }
    // Free ends: share a node with a nearby free end of another segment, else a fresh node.
    std::vector<std::vector<std::size_t>> members(g.nodes.size());
    for (std::size_t e = 0; e < ends; ++e) {
        if (node_of[e] >= 0) continue;
        int chosen = -1;
        for (std::size_t n = g.junctions.size(); n < g.nodes.size() && chosen < 0; ++n) {
            bool same_segment = false, near = false;
            for (std::size_t m : members[n]) {
                if (m / 2 == e / 2) same_segment = true;
                if (distance(end_point(m), end_point(e)) <= snap_radius) near = true;
            }
            if (near && !same_segment) chosen = static_cast<int>(n);
        }
        if (chosen < 0) {
            chosen = static_cast<int>(g.nodes.size());
            g.nodes.push_back({end_point(e), false});
            members.emplace_back();
        }
        auto& mem = members[static_cast<std::size_t>(chosen)];
        mem.push_back(e);
        Point c{0.0, 0.0};
        for (std::size_t m : mem) c = c + end_point(m);
        g.nodes[static_cast<std::size_t>(chosen)].position = (1.0 / static_cast<double>(mem.size())) * c;
        node_of[e] = chosen;
    }

    g.segment_end_nodes.reserve(g.segments.size());
    for (std::size_t s = 0; s < g.segments.size(); ++s) g.segment_end_nodes.emplace_back(node_of[2 * s], node_of[2 * s + 1]);

    g.adjacency.assign(ends, std::vector<std::uint8_t>(ends, 0));
    for (std::size_t a = 0; a < ends; ++a) {
        for (std::size_t b = 0; b < ends; ++b) {
            if (a == b) continue;
            const bool same_segment = a / 2 == b / 2;
            if (same_segment || node_of[a] == node_of[b]) g.adjacency[a][b] = 1;
        }
    }
    return g;
}

CenterlineGraph graph_from_skeleton(const BinaryMask& skeleton, double snap_radius) {
    auto junctions = detect_junctions(skeleton);
    auto segments = split_segments(skeleton, junctions);
    return build_graph(std::move(segments), std::move(junctions), snap_radius);
}

std::vector<int> candidate_endpoints(const CenterlineGraph& graph, Point guided, int n) {
    if (n < 1) throw Error("candidate_endpoints needs n >= 1");
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t s = 0; s < graph.segments.size(); ++s) ranked.emplace_back(min_vertex_distance(graph.segments[s], guided), s);
    std::sort(ranked.begin(), ranked.end());
    std::vector<int> out;
    for (std::size_t k = 0; k < ranked.size() && k < static_cast<std::size_t>(n); ++k) {
        const auto [a, b] = graph.segment_end_nodes[ranked[k].second];
        out.push_back(a);
        out.push_back(b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Polyline path_polyline(const CenterlineGraph& graph, const std::vector<int>& nodes, const std::vector<int>& segments) {
    if (nodes.size() != segments.size() + 1) throw Error("path needs one more node than segments");
    Polyline line;
    const GraphNode& first = graph.nodes[static_cast<std::size_t>(nodes.front())];
    if (first.junction) append_point(line, first.position);
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const Polyline& seg = graph.segments[static_cast<std::size_t>(segments[k])];
        const bool forward = graph.segment_end_nodes[static_cast<std::size_t>(segments[k])].first == nodes[k];
        const GraphNode& via = graph.nodes[static_cast<std::size_t>(nodes[k])];
        if (k > 0 && via.junction) append_point(line, via.position);
        if (forward) {
            for (const Point& p : seg.points) append_point(line, p);
        } else {
            for (auto it = seg.points.rbegin(); it != seg.points.rend(); ++it) append_point(line, *it);
        }
    }
    const GraphNode& last = graph.nodes[static_cast<std::size_t>(nodes.back())];
    if (last.junction) append_point(line, last.position);
    return line;
}

PathEnumeration enumerate_paths(const CenterlineGraph& graph, const std::vector<int>& starts,
                                const std::vector<int>& ends, int max_paths) {
    if (max_paths < 1) throw Error("max_paths must be >= 1");
    const std::size_t n = graph.nodes.size();
    std::vector<std::vector<std::pair<int, int>>> incident(n);  // (segment, other node)
    for (std::size_t s = 0; s < graph.segments.size(); ++s) {
        const auto [a, b] = graph.segment_end_nodes[s];
        if (a == b) continue;  // a self-loop can never be part of a simple path
        incident[static_cast<std::size_t>(a)].emplace_back(static_cast<int>(s), b);
        incident[static_cast<std::size_t>(b)].emplace_back(static_cast<int>(s), a);
    }
    std::vector<char> is_end(n, 0);
    for (int e : ends)
        if (e >= 0 && static_cast<std::size_t>(e) < n) is_end[static_cast<std::size_t>(e)] = 1;

    PathEnumeration result;
    std::vector<char> on_path(n, 0);
    std::vector<int> node_stack;
    std::vector<int> seg_stack;
    bool stop = false;

    auto dfs = [&](auto&& self, int v) -> void {
        if (!seg_stack.empty() && is_end[static_cast<std::size_t>(v)]) {
            if (result.paths.size() == static_cast<std::size_t>(max_paths)) {
                result.truncated = true;
                stop = true;
                return;
            }
            result.paths.push_back({node_stack, seg_stack, path_polyline(graph, node_stack, seg_stack)});
        }
        for (auto [seg, next] : incident[static_cast<std::size_t>(v)]) {
            if (stop) return;
            if (on_path[static_cast<std::size_t>(next)]) continue;
            on_path[static_cast<std::size_t>(next)] = 1;
            node_stack.push_back(next);
            seg_stack.push_back(seg);
            self(self, next);
            node_stack.pop_back();
            seg_stack.pop_back();
            on_path[static_cast<std::size_t>(next)] = 0;
        }
    };
    std::vector<char> started(n, 0);
    for (int s : starts) {
        if (stop) break;
        if (s < 0 || static_cast<std::size_t>(s) >= n || started[static_cast<std::size_t>(s)]) continue;
        started[static_cast<std::size_t>(s)] = 1;
        on_path[static_cast<std::size_t>(s)] = 1;
        node_stack = {s};
        seg_stack.clear();
        dfs(dfs, s);
        on_path[static_cast<std::size_t>(s)] = 0;
    }
    return result;
}

}  // namespace vtrack::vesselgraph
