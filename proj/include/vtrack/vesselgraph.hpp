#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

namespace vtrack::vesselgraph {

struct GraphNode {
    Point position;
    bool junction = false;
};

/// Centerline segments (edges) between nodes (junctions and free ends).
///
/// Segment `i` owns the two end entities `2i` (its first point) and `2i + 1`
/// (its last point). `adjacency` is the symmetric end-entity matrix: two ends
/// are connected when they belong to the same segment or when they share a node.
struct CenterlineGraph {
    std::vector<Polyline> segments;
    std::vector<Point> junctions;
    std::vector<GraphNode> nodes;  // junctions first, in the order of `junctions`
    std::vector<std::pair<int, int>> segment_end_nodes;
    std::vector<std::vector<std::uint8_t>> adjacency;

    std::size_t entity_count() const noexcept { return 2 * segments.size(); }
    bool empty() const noexcept { return segments.empty(); }
};

/// A simple path through the graph, as nodes and the segments joining them.
struct CandidatePath {
    std::vector<int> nodes;
    std::vector<int> segments;
    Polyline polyline;
};

struct PathEnumeration {
    std::vector<CandidatePath> paths;
    bool truncated = false;
};

/// Pixels with >= 3 skeleton neighbours, clustered (Chebyshev <= 2, transitively)
/// and reported at the cluster centroids.
std::vector<Point> detect_junctions(const BinaryMask& skeleton);

/// Junction-free pixel chains traced end to end. Isolated pixels are dropped.
std::vector<Polyline> split_segments(const BinaryMask& skeleton, const std::vector<Point>& junctions);

/// Assigns segment ends to junctions within `snap_radius`; remaining ends of
/// different segments closer than `snap_radius` share a node, others get their own.
CenterlineGraph build_graph(std::vector<Polyline> segments, std::vector<Point> junctions, double snap_radius = 3.0);

/// Convenience: detect_junctions + split_segments + build_graph.
CenterlineGraph graph_from_skeleton(const BinaryMask& skeleton, double snap_radius = 3.0);

/// End nodes of the `n` segments closest (minimum vertex distance) to `guided`,
/// ties broken by segment index. Sorted, deduplicated node ids.
std::vector<int> candidate_endpoints(const CenterlineGraph& graph, Point guided, int n);

/// All simple paths (no repeated node) from any start node to any end node, by
/// depth-first search; repeated start ids are searched once. Stops after
/// `max_paths` paths and flags truncation.
PathEnumeration enumerate_paths(const CenterlineGraph& graph, const std::vector<int>& starts,
                                const std::vector<int>& ends, int max_paths = 512);

/// Polyline of a node/segment sequence. Segments are oriented to leave the
/// current node; gaps across nodes are filled with straight steps of <= 1 px and
/// junction start/end nodes are included as the first/last point.
Polyline path_polyline(const CenterlineGraph& graph, const std::vector<int>& nodes, const std::vector<int>& segments);

}  // namespace vtrack::vesselgraph
