#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "vtrack/centerline.hpp"
#include "vtrack/config.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"
#include "vtrack/matching.hpp"
#include "vtrack/preprocess.hpp"

namespace vtrack::tracker {

/// Outcome of tracking one branch onto the current frame.
struct BranchResult {
    Polyline polyline;
    bool fallback = false;      // polyline is the registration-mapped guided branch
    double distance = 0.0;      // warping distance of the best candidate (0 if none was scored)
    std::size_t candidates = 0;
    bool truncated = false;     // path enumeration hit max_paths
};

/// Work shared by every branch of one key/current frame pair.
struct FramePair {
    const ImageFrame* key = nullptr;
    const ImageFrame* cur = nullptr;
    preprocess::RegistrationResult registration;
    centerline::RidgeResponse response;  // of the current frame
    std::optional<BinaryMask> segmentation;  // vessel mask of the current frame, if supplied

    FramePair(const ImageFrame& key_frame, const ImageFrame& cur_frame, const TrackerConfig& cfg,
              std::optional<preprocess::DeformationField> field = std::nullopt);
};

/// DAISY fields covering the guided branches on the key frame and their search
/// area on the current frame.
struct DescriptorFields {
    matching::DaisyField key;
    matching::DaisyField cur;
};
DescriptorFields descriptor_fields(const FramePair& pair, const VesselAnnotation& guided, const TrackerConfig& cfg);

BranchResult track_branch(const FramePair& pair, const DescriptorFields& fields, const Polyline& guided,
                          const TrackerConfig& cfg);
/// Single-branch convenience (registers the pair itself).
BranchResult track_branch(const ImageFrame& key, const ImageFrame& cur, const Polyline& guided, const TrackerConfig& cfg);

/// Joins branches tracked on one frame: endpoints of different branches within
/// the snap radius move to their centroid, and endpoints close to another
/// branch are extended along a minimum-cost bridge to it. Idempotent.
VesselAnnotation fuse_branches(const std::vector<Polyline>& branches, const centerline::RidgeResponse& resp,
                               const TrackerConfig& cfg);

struct FrameResult {
    int frame = 0;
    int key_frame = 0;
    VesselAnnotation annotation;  // output (fused when fusion is enabled)
    std::vector<BranchResult> branches;
    bool registration_warning = false;
    double seconds = 0.0;
};

struct TrackingReport {
    std::vector<FrameResult> frames;

    std::size_t fallback_count() const;
};

/// External deformation field for (key index, current index), if any.
using FieldProvider = std::function<std::optional<preprocess::DeformationField>(int, int)>;
/// External segmentation mask for a frame index, if any; it restricts the tracking range.
using MaskProvider = std::function<std::optional<BinaryMask>(int)>;

/// Tracks `initial` (annotation of frame 0) through frames stride, 2*stride, ...
/// The tracked selections of each frame become the next key annotation.
TrackingReport track_sequence(const std::vector<ImageFrame>& frames, const VesselAnnotation& initial,
                              const TrackerConfig& cfg, int stride = 1, const FieldProvider& fields = {},
                              const MaskProvider& masks = {});

/// Per-frame distances and fallback flags; no timings, so reruns compare equal.
void write_report(std::ostream& out, const TrackingReport& report);
void write_timings(std::ostream& out, const TrackingReport& report);

}  // namespace vtrack::tracker
