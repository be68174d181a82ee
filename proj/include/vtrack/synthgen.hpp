#pragma once

#include <cstdint>
#include <vector>

#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

namespace vtrack::synthgen {

struct SynthParams {
    std::uint64_t seed = 7;
    int depth = 2;             // levels of the tree (1 = trunk only)
    int branch_count = 3;      // total branches including the trunk
    double tube_width = 2.0;   // Gaussian cross-section std (px)
    double contrast = 0.35;    // axis darkening below the background
    double background = 0.8;
    double background_gradient = 0.0;  // left-to-right intensity ramp amplitude
    double noise_std = 0.05;
    double amplitude = 4.0;    // peak motion (px)
    int frames_per_cycle = 12;
    int frame_count = 12;
    int width = 512;
    int height = 512;
};

/// Random smooth tree; children start exactly on a point of their parent.
VesselAnnotation gen_tree(const SynthParams& params);

/// Displacement of a location at frame `t`: amplitude * sin(2 pi t / period)
/// times a smooth unit-bounded spatial field with magnitude in [0.75, 1].
Point motion_at(Point p, int t, const SynthParams& params);

/// Moves every tree point by motion_at(); identity at t = 0 and every full period.
VesselAnnotation deform_tree(const VesselAnnotation& tree, int t, const SynthParams& params);

/// Noise-free frame of dark Gaussian tubes on the background (used by render_sequence).
Grid<double> render_tubes(const VesselAnnotation& ann, const SynthParams& params);

struct Sequence {
    std::vector<ImageFrame> frames;
    std::vector<VesselAnnotation> truth;
};

/// Frames 0..frame_count-1 with additive Gaussian noise (per-frame derived seed)
/// and the deformed tree of each frame as ground truth.
Sequence render_sequence(const VesselAnnotation& tree, const SynthParams& params);

/// Frame of a single straight tube between two points, for filter tests.
ImageFrame straight_tube(int width, int height, Point a, Point b, double tube_width, double contrast,
                         double noise_std = 0.0, std::uint64_t seed = 1);

}  // namespace vtrack::synthgen
