#pragma once

#include <vector>

#include "vtrack/centerline.hpp"
#include "vtrack/config.hpp"
#include "vtrack/geometry.hpp"

namespace vtrack::gap_repair {

/// Per-pixel traversal cost -log(p), p = connection probability floored at 1e-6.
struct ConnectionCostMap {
    Grid<double> probability;
    Grid<double> cost;
};

/// Fuses blurred-skeleton saliency, ridge response and orientation coherence
/// with nearby skeleton endpoints into a connection probability.
ConnectionCostMap connection_cost(const centerline::RidgeResponse& resp, const BinaryMask& skeleton,
                                  const ConnectionParams& params = {});

/// Skeleton pixels with exactly one set 8-neighbour.
std::vector<std::pair<int, int>> skeleton_endpoints(const BinaryMask& skeleton);

/// 8-connected component labels (-1 = background); returns the component count.
int label_components(const BinaryMask& mask, Grid<int>& labels);

/// Minimum-cost 8-connected path between two pixels (both inclusive). The search
/// is restricted to `allowed`; an empty result means the target is unreachable.
std::vector<std::pair<int, int>> min_cost_path(const Grid<double>& cost, std::pair<int, int> from,
                                               std::pair<int, int> to, const BinaryMask& allowed);

/// Search window for a bridge: the bounding box of the pair dilated by max_gap/2,
/// intersected with the disks of radius 1.5 * max_gap around both ends.
BinaryMask bridge_window(int width, int height, std::pair<int, int> a, std::pair<int, int> b, double max_gap);

/// Mean of `cost` over the path pixels.
double mean_path_cost(const Grid<double>& cost, const std::vector<std::pair<int, int>>& path);

/// Connects skeleton endpoints to other components (their endpoints first, then
/// their nearest pixel) with minimum-cost paths, repeating until nothing more
/// can be bridged. Components only merge; the result is re-thinned when changed.
BinaryMask bridge_gaps(const BinaryMask& skeleton, const ConnectionCostMap& costs, double max_gap,
                       double acceptance_ceiling);

}  // namespace vtrack::gap_repair
