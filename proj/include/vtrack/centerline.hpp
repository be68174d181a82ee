#pragma once

#include <optional>
#include <vector>

#include "vtrack/image.hpp"

namespace vtrack::centerline {

/// Multi-scale ridge filter output.
struct RidgeResponse {
    Grid<double> response;     // [0,1], normalized over the frame
    Grid<double> orientation;  // vessel direction in [0, pi)
    Grid<double> best_scale;   // scale (px) of the maximal response
};

/// Hessian vesselness for dark tubes on a bright background, maximized over
/// `scales`. Frangi weighting with beta = 0.5 and c = half the largest Hessian
/// norm at each scale.
RidgeResponse vesselness(const ImageFrame& frame, const std::vector<double>& scales);

/// Otsu over the nonzero in-range responses, floored at `floor`.
double auto_threshold(const RidgeResponse& resp, const BinaryMask& range, double floor = 0.05);

/// Ridge non-maximum suppression across the vessel direction, then thinning.
/// Without a threshold, auto_threshold() is used.
BinaryMask extract_centerline(const RidgeResponse& resp, const BinaryMask& range,
                              std::optional<double> threshold = std::nullopt);

/// Two-subiteration (Zhang-Suen) thinning followed by removal of pixels that are
/// redundant for 8-connectivity (staircase corners).
BinaryMask thin(BinaryMask mask);

/// Number of set 8-neighbours.
int neighbor_count(const BinaryMask& mask, int x, int y);

}  // namespace vtrack::centerline
