#include "vtrack/gap_repair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <tuple>

#include "vtrack/filters.hpp"

namespace vtrack::gap_repair {
namespace {

using Pixel = std::pair<int, int>;

struct Box {
    int x0, y0, x1, y1;  // inclusive
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

/// Dijkstra over the pixels of `box` accepted by `allowed(x, y)`.
template <typename Allowed>
std::vector<Pixel> dijkstra(const Grid<double>& cost, Pixel from, Pixel to, const Box& box, Allowed allowed) {
    const int bw = box.width();
    const int bh = box.height();
    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y - box.y0) * bw + static_cast<std::size_t>(x - box.x0); };
    std::vector<double> dist(static_cast<std::size_t>(bw) * bh, std::numeric_limits<double>::infinity());
    std::vector<int> prev(dist.size(), -1);
    using Item = std::tuple<double, int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[idx(from.first, from.second)] = 0.0;
    heap.emplace(0.0, from.first, from.second);
    while (!heap.empty()) {
        const auto [d, x, y] = heap.top();
        heap.pop();
        if (d > dist[idx(x, y)]) continue;
        if (x == to.first && y == to.second) break;
        for (int v = -1; v <= 1; ++v) {
            for (int u = -1; u <= 1; ++u) {
                if (u == 0 && v == 0) continue;
                const int nx = x + u;
                const int ny = y + v;
                if (nx < box.x0 || ny < box.y0 || nx > box.x1 || ny > box.y1 || !allowed(nx, ny)) continue;
                const double step = (u != 0 && v != 0) ? std::numbers::sqrt2 : 1.0;
                const double nd = d + 0.5 * (cost(x, y) + cost(nx, ny)) * step;
                if (nd < dist[idx(nx, ny)]) {
                    dist[idx(nx, ny)] = nd;
                    prev[idx(nx, ny)] = static_cast<int>(idx(x, y));
                    heap.emplace(nd, nx, ny);
                }
            }
        }
    }
    if (!std::isfinite(dist[idx(to.first, to.second)])) return {};
    std::vector<Pixel> path;
    for (int cur = static_cast<int>(idx(to.first, to.second)); cur >= 0; cur = prev[static_cast<std::size_t>(cur)]) {
        path.emplace_back(box.x0 + cur % bw, box.y0 + cur / bw);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Box window_box(int width, int height, Pixel a, Pixel b, double max_gap) {
    const int pad = static_cast<int>(std::ceil(max_gap / 2.0));
    return {std::max(0, std::min(a.first, b.first) - pad), std::max(0, std::min(a.second, b.second) - pad),
            std::min(width - 1, std::max(a.first, b.first) + pad), std::min(height - 1, std::max(a.second, b.second) + pad)};
}

bool within_reach(int x, int y, Pixel a, Pixel b, double reach) {
    const double r2 = reach * reach;
    const double da = (x - a.first) * (x - a.first) + (y - a.second) * (y - a.second);
    const double db = (x - b.first) * (x - b.first) + (y - b.second) * (y - b.second);
    return da <= r2 && db <= r2;
}

std::vector<int> parents_init(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

}  // namespace

ConnectionCostMap connection_cost(const centerline::RidgeResponse& resp, const BinaryMask& skeleton,
                                  const ConnectionParams& params) {
    if (!skeleton.same_shape(resp.response)) throw Error("skeleton and response differ in size");
    const int w = skeleton.width();
    const int h = skeleton.height();

    Grid<double> indicator(w, h, 0.0);
    for (std::size_t i = 0; i < skeleton.size(); ++i) indicator.values()[i] = skeleton.values()[i] ? 1.0 : 0.0;
    Grid<double> saliency = filters::gaussian_blur(indicator, params.skeleton_blur_std);
    // An infinite straight line blurs to 1 / (sqrt(2 pi) std) on its axis; rescale that to 1.
    const double line_peak = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * params.skeleton_blur_std);
    for (double& v : saliency.values()) v = std::min(1.0, v / line_peak);

    // Orientation of the nearest endpoint within the radius (-1 = none).
    Grid<double> best_d2(w, h, std::numeric_limits<double>::infinity());
    Grid<double> end_orientation(w, h, -1.0);
    const int r = static_cast<int>(std::floor(params.orientation_radius));
    const double r2 = params.orientation_radius * params.orientation_radius;
    for (auto [ex, ey] : skeleton_endpoints(skeleton)) {
        for (int v = -r; v <= r; ++v) {
            for (int u = -r; u <= r; ++u) {
                const int x = ex + u;
                const int y = ey + v;
                const double d2 = u * u + v * v;
                if (d2 > r2 || !skeleton.contains(x, y) || d2 >= best_d2(x, y)) continue;
                best_d2(x, y) = d2;
                end_orientation(x, y) = resp.orientation(ex, ey);
            }
        }
    }

    ConnectionCostMap out{Grid<double>(w, h), Grid<double>(w, h)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double coherence = 0.5;
            if (end_orientation(x, y) >= 0.0) {
                const double c = std::cos(resp.orientation(x, y) - end_orientation(x, y));
                coherence = c * c;
            }
            const double p = std::clamp(params.w_skeleton * saliency(x, y) + params.w_response * resp.response(x, y) +
                                            params.w_orientation * coherence,
                                        1e-6, 1.0);
            out.probability(x, y) = p;
            out.cost(x, y) = -std::log(p);
        }
    }
    return out;
}

std::vector<std::pair<int, int>> skeleton_endpoints(const BinaryMask& skeleton) {
    std::vector<Pixel> out;
    for (int y = 0; y < skeleton.height(); ++y)
        for (int x = 0; x < skeleton.width(); ++x)
            if (skeleton(x, y) && centerline::neighbor_count(skeleton, x, y) == 1) out.emplace_back(x, y);
    return out;
}

int label_components(const BinaryMask& mask, Grid<int>& labels) {
    labels = Grid<int>(mask.width(), mask.height(), -1);
    int count = 0;
    std::vector<Pixel> stack;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y) || labels(x, y) >= 0) continue;
            labels(x, y) = count;
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int v = -1; v <= 1; ++v)
                    for (int u = -1; u <= 1; ++u) {
                        const int nx = cx + u, ny = cy + v;
                        if (!mask.contains(nx, ny) || !mask(nx, ny) || labels(nx, ny) >= 0) continue;
                        labels(nx, ny) = count;
                        stack.emplace_back(nx, ny);
                    }
            }
            ++count;
        }
    }
    return count;
}

std::vector<std::pair<int, int>> min_cost_path(const Grid<double>& cost, std::pair<int, int> from,
                                               std::pair<int, int> to, const BinaryMask& allowed) {
    if (!allowed.same_shape(cost)) throw Error("allowed mask and cost map differ in size");
    if (!allowed.contains(from.first, from.second) || !allowed.contains(to.first, to.second)) return {};
    if (!allowed(from.first, from.second) || !allowed(to.first, to.second)) return {};
    Box box{cost.width(), cost.height(), -1, -1};
    for (int y = 0; y < allowed.height(); ++y)
        for (int x = 0; x < allowed.width(); ++x)
            if (allowed(x, y)) {
                box.x0 = std::min(box.x0, x);
                box.y0 = std::min(box.y0, y);
                box.x1 = std::max(box.x1, x);
                box.y1 = std::max(box.y1, y);
            }
    return dijkstra(cost, from, to, box, [&](int x, int y) { return allowed(x, y) != 0; });
}

BinaryMask bridge_window(int width, int height, std::pair<int, int> a, std::pair<int, int> b, double max_gap) {
    BinaryMask m(width, height, 0);
    const Box box = window_box(width, height, a, b, max_gap);
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x)
            if (within_reach(x, y, a, b, 1.5 * max_gap)) m(x, y) = 1;
    return m;
}

double mean_path_cost(const Grid<double>& cost, const std::vector<std::pair<int, int>>& path) {
    if (path.empty()) return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (auto [x, y] : path) acc += cost(x, y);
    return acc / static_cast<double>(path.size());
}

BinaryMask bridge_gaps(const BinaryMask& skeleton, const ConnectionCostMap& costs, double max_gap,
                       double acceptance_ceiling) {
    if (!(max_gap >= 1.0)) throw Error("max_gap must be >= 1");
    if (!skeleton.same_shape(costs.cost)) throw Error("skeleton and cost map differ in size");
    const int w = skeleton.width();
    const int h = skeleton.height();
    BinaryMask current = skeleton;
    const int reach = static_cast<int>(std::floor(max_gap));

    struct Candidate {
        double distance;
        int target_is_endpoint;  // 0 = endpoint (preferred), 1 = body pixel
        int source;              // endpoint index
        Pixel target;
    };

    for (int pass = 0; pass < 64; ++pass) {
        Grid<int> labels;
        const int ncomp = label_components(current, labels);
        const auto ends = skeleton_endpoints(current);
        if (ncomp < 2 || ends.empty()) break;
        Grid<int> end_index(w, h, -1);
        for (std::size_t i = 0; i < ends.size(); ++i) end_index(ends[i].first, ends[i].second) = static_cast<int>(i);

        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < ends.size(); ++i) {
            const auto [ex, ey] = ends[i];
            const int own = labels(ex, ey);
            // Nearest pixel of every other component, endpoints preferred on ties.
            std::vector<std::tuple<double, int, Pixel>> best;  // per component label
            std::vector<int> seen_label;
            for (int v = -reach; v <= reach; ++v) {
                for (int u = -reach; u <= reach; ++u) {
                    const int x = ex + u, y = ey + v;
                    if (!current.contains(x, y) || !current(x, y)) continue;
                    const int lab = labels(x, y);
                    if (lab == own) continue;
                    const double d = std::hypot(u, v);
                    if (d > max_gap) continue;
                    const int kind = end_index(x, y) >= 0 ? 0 : 1;
                    auto it = std::find(seen_label.begin(), seen_label.end(), lab);
                    if (it == seen_label.end()) {
                        seen_label.push_back(lab);
                        best.emplace_back(d, kind, Pixel{x, y});
                    } else {
                        auto& b = best[static_cast<std::size_t>(it - seen_label.begin())];
                        if (std::tie(d, kind) < std::tie(std::get<0>(b), std::get<1>(b))) b = {d, kind, Pixel{x, y}};
                    }
                }
            }
            for (const auto& [d, kind, px] : best) candidates.push_back({d, kind, static_cast<int>(i), px});
            // An endpoint of another component within reach is also a candidate on its own.
            for (int v = -reach; v <= reach; ++v) {
                for (int u = -reach; u <= reach; ++u) {
                    const int x = ex + u, y = ey + v;
                    if (!current.contains(x, y) || end_index(x, y) < 0 || labels(x, y) == own) continue;
                    const double d = std::hypot(u, v);
                    if (d > max_gap) continue;
                    candidates.push_back({d, 0, static_cast<int>(i), Pixel{x, y}});
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            return std::tie(a.distance, a.target_is_endpoint, a.source, a.target) <
                   std::tie(b.distance, b.target_is_endpoint, b.source, b.target);
        });

        auto parent = parents_init(ncomp);
        std::vector<char> used(ends.size(), 0);
        bool added = false;
        for (const Candidate& c : candidates) {
            const Pixel src = ends[static_cast<std::size_t>(c.source)];
            const int target_end = end_index(c.target.first, c.target.second);
            if (used[static_cast<std::size_t>(c.source)]) continue;
            if (target_end >= 0 && used[static_cast<std::size_t>(target_end)]) continue;
            const int ra = find_root(parent, labels(src.first, src.second));
            const int rb = find_root(parent, labels(c.target.first, c.target.second));
            if (ra == rb) continue;
            const Box box = window_box(w, h, src, c.target, max_gap);
            const auto path = dijkstra(costs.cost, src, c.target, box, [&](int x, int y) {
                return within_reach(x, y, src, c.target, 1.5 * max_gap);
            });
            if (path.empty() || mean_path_cost(costs.cost, path) > acceptance_ceiling) continue;
            for (auto [x, y] : path) current(x, y) = 1;
            used[static_cast<std::size_t>(c.source)] = 1;
            if (target_end >= 0) used[static_cast<std::size_t>(target_end)] = 1;
            parent[static_cast<std::size_t>(ra)] = rb;
            added = true;
        }
        if (!added) break;
        current = centerline::thin(std::move(current));
    }
    return current;
}

}  // namespace vtrack::gap_repair
