#pragma once

// Random centerline graphs and an independent simple-path oracle.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "support.hpp"
#include "vtrack/vesselgraph.hpp"

namespace fixtures {

struct RandomGraph {
    vtrack::vesselgraph::CenterlineGraph graph;
    std::vector<std::vector<int>> multiplicity;  // node x node, self-loops excluded
    std::vector<std::pair<int, int>> edges;      // per segment
};

/// Nodes on a circle (all given as junctions), straight segments between them,
/// occasional parallel edges and self-loops.
inline RandomGraph random_graph(std::mt19937& rng, int nodes, int edge_count) {
    std::vector<vtrack::Point> pos;
    for (int i = 0; i < nodes; ++i) {
        const double a = 2.0 * std::numbers::pi * i / nodes;
        pos.push_back({200.0 + 150.0 * std::cos(a), 200.0 + 150.0 * std::sin(a)});
    }
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    RandomGraph g;
    g.multiplicity.assign(std::size_t(nodes), std::vector<int>(std::size_t(nodes), 0));
    std::vector<vtrack::Polyline> segments;
    for (int e = 0; e < edge_count; ++e) {
        const int a = pick(rng), b = pick(rng);
        if (a == b) {
            const vtrack::Point p = pos[std::size_t(a)];
            vtrack::Polyline loop = line(p, p + vtrack::Point{10, 0});
            for (const auto& q : vtrack::interpolate_segment(p + vtrack::Point{10, 0}, p + vtrack::Point{10, 10})) loop.points.push_back(q);
            for (const auto& q : vtrack::interpolate_segment(p + vtrack::Point{10, 10}, p)) loop.points.push_back(q);
            segments.push_back(loop);
        } else {
            segments.push_back(line(pos[std::size_t(a)], pos[std::size_t(b)]));
            ++g.multiplicity[std::size_t(a)][std::size_t(b)];
            ++g.multiplicity[std::size_t(b)][std::size_t(a)];
        }
        g.edges.emplace_back(a, b);
    }
    g.graph = vtrack::vesselgraph::build_graph(segments, pos, 3.0);
    return g;
}

using PathKey = std::pair<std::vector<int>, std::vector<int>>;  // nodes, segments

/// Expands a node sequence into every choice of parallel segments.
inline void expand(const RandomGraph& g, const std::vector<int>& seq, std::set<PathKey>& out) {
    std::vector<std::vector<int>> choices;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        std::vector<int> c;
        for (std::size_t s = 0; s < g.edges.size(); ++s) {
            const auto [a, b] = g.edges[s];
            if (a == b) continue;
            if ((a == seq[k] && b == seq[k + 1]) || (b == seq[k] && a == seq[k + 1])) c.push_back(int(s));
        }
        if (c.empty()) return;
        choices.push_back(c);
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    for (;;) {
        std::vector<int> segs;
        for (std::size_t k = 0; k < choices.size(); ++k) segs.push_back(choices[k][idx[k]]);
        out.insert({seq, segs});
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
}

/// Every ordered sequence of distinct nodes (length >= 2) from a start to an end
/// whose consecutive nodes are joined by at least one segment.
inline std::set<PathKey> brute_force_paths(const RandomGraph& g, const std::vector<int>& starts, const std::vector<int>& ends) {
    std::set<PathKey> out;
    const int n = int(g.multiplicity.size());
    std::vector<int> seq;
    std::vector<char> used(std::size_t(n), 0);
    auto grow = [&](auto&& self) -> void {
        if (seq.size() >= 2 && std::find(ends.begin(), ends.end(), seq.back()) != ends.end()) expand(g, seq, out);
        for (int v = 0; v < n; ++v) {
            if (used[std::size_t(v)] || g.multiplicity[std::size_t(seq.back())][std::size_t(v)] == 0) continue;
            used[std::size_t(v)] = 1;
            seq.push_back(v);
            self(self);
            seq.pop_back();
            used[std::size_t(v)] = 0;
        }
    };
    for (int s : starts) {
        seq = {s};
        used.assign(std::size_t(n), 0);
        used[std::size_t(s)] = 1;
        grow(grow);
    }
    return out;
}

/// Same as brute_force_paths, but without adjacency pruning: all permutations of
/// all node subsets are generated and filtered.
inline std::set<PathKey> permutation_paths(const RandomGraph& g, const std::vector<int>& starts, const std::vector<int>& ends) {
    std::set<PathKey> out;
    const int n = int(g.multiplicity.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> subset;
        for (int v = 0; v < n; ++v)
            if (mask & (1 << v)) subset.push_back(v);
        if (subset.size() < 2) continue;
        do {
            if (std::find(starts.begin(), starts.end(), subset.front()) == starts.end()) continue;
            if (std::find(ends.begin(), ends.end(), subset.back()) == ends.end()) continue;
            expand(g, subset, out);
        } while (std::next_permutation(subset.begin(), subset.end()));
    }
    return out;
}

}  // namespace fixtures
