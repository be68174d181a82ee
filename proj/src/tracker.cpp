#include "vtrack/tracker.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>

#include "vtrack/gap_repair.hpp"
#include "vtrack/vesselgraph.hpp"

namespace vtrack::tracker {
namespace {

using Pixel = std::pair<int, int>;

Pixel to_pixel(Point p) { return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))}; }

/// Inserts straight steps wherever consecutive points are more than 1 px apart
/// and drops repeated points.
Polyline densify(const Polyline& p) {
    Polyline out;
    for (const Point& q : p.points) {
        if (out.points.empty()) {
            out.points.push_back(q);
            continue;
        }
        if (q == out.points.back()) continue;
        if (chebyshev(out.points.back(), q) > 1.0) {
            for (const Point& s : interpolate_segment(out.points.back(), q)) out.points.push_back(s);
        } else {
            out.points.push_back(q);
        }
    }
    return out;
}

struct EndRef {
    std::size_t branch;
    bool back;
};

Point& end_point(std::vector<Polyline>& lines, const EndRef& e) {
    auto& pts = lines[e.branch].points;
    return e.back ? pts.back() : pts.front();
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

bool snap_endpoints(std::vector<Polyline>& lines, double radius) {
    std::vector<EndRef> ends;
    for (std::size_t b = 0; b < lines.size(); ++b) {
        if (lines[b].size() < 2) continue;
        ends.push_back({b, false});
        ends.push_back({b, true});
    }
    std::vector<int> parent(ends.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < ends.size(); ++i)
        for (std::size_t j = i + 1; j < ends.size(); ++j) {
            if (ends[i].branch == ends[j].branch) continue;
            if (distance(end_point(lines, ends[i]), end_point(lines, ends[j])) <= radius)
                parent[static_cast<std::size_t>(find_root(parent, static_cast<int>(i)))] = find_root(parent, static_cast<int>(j));
        }

    bool changed = false;
    for (std::size_t r = 0; r < ends.size(); ++r) {
        if (find_root(parent, static_cast<int>(r)) != static_cast<int>(r)) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ends.size(); ++i)
            if (find_root(parent, static_cast<int>(i)) == static_cast<int>(r)) members.push_back(i);
        if (members.size() < 2) continue;
        bool both_ends = false;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                both_ends |= ends[members[a]].branch == ends[members[b]].branch;
        if (both_ends) continue;
        const Point first = end_point(lines, ends[members[0]]);
        bool coincide = true;
        Point sum{0.0, 0.0};
        for (std::size_t m : members) {
            const Point p = end_point(lines, ends[m]);
            coincide &= p == first;
            sum = sum + p;
        }
        if (coincide) continue;
        const Point centroid = (1.0 / static_cast<double>(members.size())) * sum;
        for (std::size_t m : members) {
            end_point(lines, ends[m]) = centroid;
            Polyline& line = lines[ends[m].branch];
            line = densify(line);
        }
        changed = true;
    }
    return changed;
}

bool touching(const Polyline& a, const Polyline& b) {
    for (const Point& p : a.points)
        for (const Point& q : b.points)
            if (distance(p, q) <= 1.5) return true;
    return false;
}

bool bridge_endpoints(std::vector<Polyline>& lines, const centerline::RidgeResponse& resp, const TrackerConfig& cfg) {
    const int w = resp.response.width();
    const int h = resp.response.height();
    BinaryMask drawn(w, h, 0);
    for (const auto& l : lines)
        if (l.size() >= 2) rasterize(l, drawn);
    const auto costs = gap_repair::connection_cost(resp, drawn, cfg.connection);
    const double ceiling = cfg.connection.acceptance_ceiling();

    bool changed = false;
    for (std::size_t b = 0; b < lines.size(); ++b) {
        for (bool back : {false, true}) {
            if (lines[b].size() < 2) continue;
            const Point p = back ? lines[b].back() : lines[b].front();
            double best = std::numeric_limits<double>::infinity();
            Point target;
            for (std::size_t o = 0; o < lines.size(); ++o) {
                // Already connected branches are not bridged a second time.
                if (o == b || touching(lines[b], lines[o])) continue;
                for (const Point& q : lines[o].points) {
                    const double d = distance(p, q);
                    if (d < best) {
                        best = d;
                        target = q;
                    }
                }
            }
            if (!(best > 1.5 && best <= cfg.max_gap)) continue;
            const Pixel from = to_pixel(p);
            const Pixel to = to_pixel(target);
            if (!drawn.contains(from.first, from.second) || !drawn.contains(to.first, to.second)) continue;
            const auto window = gap_repair::bridge_window(w, h, from, to, cfg.max_gap);
            const auto path = gap_repair::min_cost_path(costs.cost, from, to, window);
            if (path.empty() || gap_repair::mean_path_cost(costs.cost, path) > ceiling) continue;

            Polyline ext;
            ext.points.push_back(p);
            for (std::size_t k = 1; k + 1 < path.size(); ++k)
                ext.points.push_back({static_cast<double>(path[k].first), static_cast<double>(path[k].second)});
            ext.points.push_back(target);
            auto& pts = lines[b].points;
            if (back) {
                pts.insert(pts.end(), ext.points.begin() + 1, ext.points.end());
            } else {
                std::vector<Point> head(ext.points.rbegin(), ext.points.rend() - 1);
                pts.insert(pts.begin(), head.begin(), head.end());
            }
            lines[b] = densify(lines[b]);
            changed = true;
        }
    }
    return changed;
}

}  // namespace

FramePair::FramePair(const ImageFrame& key_frame, const ImageFrame& cur_frame, const TrackerConfig& cfg,
                     std::optional<preprocess::DeformationField> field)
    : key(&key_frame), cur(&cur_frame) {
    if (key_frame.width() != cur_frame.width() || key_frame.height() != cur_frame.height())
        throw Error("key and current frames differ in size");
    if (field) {
        if (field->width() != cur_frame.width() || field->height() != cur_frame.height())
            throw Error("deformation field size does not match the frames");
        registration.field = std::move(*field);
    } else {
        registration = preprocess::register_frames(key_frame, cur_frame, cfg.registration);
    }
    response = centerline::vesselness(cur_frame, cfg.scales);
}

DescriptorFields descriptor_fields(const FramePair& pair, const VesselAnnotation& guided, const TrackerConfig& cfg) {
    const matching::Region key_roi = matching::bounding_region(guided.branches, 2);
    const auto mapped = preprocess::map_annotation(guided, pair.registration.field);
    const int margin = static_cast<int>(std::ceil(cfg.sigma + cfg.max_gap)) + 3;
    const matching::Region cur_roi = matching::bounding_region(mapped.branches, margin);
    return {matching::DaisyField(*pair.key, cfg.daisy, key_roi), matching::DaisyField(*pair.cur, cfg.daisy, cur_roi)};
}

BranchResult track_branch(const FramePair& pair, const DescriptorFields& fields, const Polyline& guided,
                          const TrackerConfig& cfg) {
    const int w = pair.cur->width();
    const int h = pair.cur->height();
    BranchResult fallback;
    fallback.polyline = preprocess::map_polyline(guided, pair.registration.field);
    fallback.fallback = true;
    const Polyline& mapped = fallback.polyline;

    BinaryMask range = preprocess::tracking_range(mapped, cfg.sigma, w, h);
    if (pair.segmentation) {
        if (!pair.segmentation->same_shape(range)) throw Error("segmentation mask size does not match the frame");
        auto r = range.values();
        auto s = pair.segmentation->values();
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (r[i] && s[i]) ? 1 : 0;
    }
    const double thr = cfg.threshold ? *cfg.threshold : centerline::auto_threshold(pair.response, range, cfg.min_threshold);
    BinaryMask skeleton = centerline::extract_centerline(pair.response, range, thr);
    if (count_set(skeleton) == 0) return fallback;

    const auto costs = gap_repair::connection_cost(pair.response, skeleton, cfg.connection);
    skeleton = gap_repair::bridge_gaps(skeleton, costs, cfg.max_gap, cfg.connection.acceptance_ceiling());

    const auto graph = vesselgraph::graph_from_skeleton(skeleton, cfg.snap_radius);
    if (graph.empty()) return fallback;
    const auto starts = vesselgraph::candidate_endpoints(graph, mapped.front(), cfg.n_nearest);
    const auto ends = vesselgraph::candidate_endpoints(graph, mapped.back(), cfg.n_nearest);
    const auto found = vesselgraph::enumerate_paths(graph, starts, ends, cfg.max_paths);

    std::vector<Polyline> candidates;
    for (const auto& path : found.paths)
        if (path.polyline.size() >= 2) candidates.push_back(path.polyline);
    if (candidates.empty()) {
        fallback.truncated = found.truncated;
        return fallback;
    }
    const auto sel = matching::select_branch(fields.key, fields.cur, guided, candidates, cfg.resample_spacing);
    if (sel.distance > cfg.max_match_cost * static_cast<double>(sel.path_length)) {
        fallback.candidates = candidates.size();
        fallback.truncated = found.truncated;
        fallback.distance = sel.distance;
        return fallback;
    }
    BranchResult out;
    out.polyline = sel.best;
    out.distance = sel.distance;
    out.candidates = candidates.size();
    out.truncated = found.truncated;
    return out;
}

BranchResult track_branch(const ImageFrame& key, const ImageFrame& cur, const Polyline& guided, const TrackerConfig& cfg) {
    cfg.validate();
    VesselAnnotation ann;
    ann.branches.push_back(guided);
    validate_annotation(ann, key.width(), key.height());
    const FramePair pair(key, cur, cfg);
    const auto fields = descriptor_fields(pair, ann, cfg);
    return track_branch(pair, fields, guided, cfg);
}

VesselAnnotation fuse_branches(const std::vector<Polyline>& branches, const centerline::RidgeResponse& resp,
                               const TrackerConfig& cfg) {
    VesselAnnotation out;
    out.branches = branches;
    for (int round = 0; round < 16; ++round) {
        bool changed = snap_endpoints(out.branches, cfg.snap_radius);
        changed |= bridge_endpoints(out.branches, resp, cfg);
        if (!changed) break;
    }
    return out;
}

std::size_t TrackingReport::fallback_count() const {
    std::size_t n = 0;
    for (const auto& f : frames)
        for (const auto& b : f.branches) n += b.fallback ? 1 : 0;
    return n;
}

TrackingReport track_sequence(const std::vector<ImageFrame>& frames, const VesselAnnotation& initial,
                              const TrackerConfig& cfg, int stride, const FieldProvider& fields,
                              const MaskProvider& masks) {
    cfg.validate();
    if (frames.size() < 2) throw Error("tracking needs at least two frames");
    if (stride < 1) throw Error("stride must be >= 1");
    const int w = frames.front().width();
    const int h = frames.front().height();
    for (const auto& f : frames)
        if (f.width() != w || f.height() != h) throw Error("frames differ in size");
    validate_annotation(initial, w, h);

    TrackingReport report;
    VesselAnnotation key = initial;
    key.frame_index = 0;
    const int count = static_cast<int>(frames.size());
    for (int t = stride; t < count; t += stride) {
        const auto started = std::chrono::steady_clock::now();
        const int k = key.frame_index;
        std::optional<preprocess::DeformationField> field;
        if (fields) field = fields(k, t);
        FramePair pair(frames[static_cast<std::size_t>(k)], frames[static_cast<std::size_t>(t)], cfg, std::move(field));
        if (masks) pair.segmentation = masks(t);
        const auto daisy = descriptor_fields(pair, key, cfg);

        FrameResult fr;
        fr.frame = t;
        fr.key_frame = k;
        fr.registration_warning = pair.registration.warning;
        std::vector<Polyline> selected;
        for (const auto& branch : key.branches) {
            fr.branches.push_back(track_branch(pair, daisy, branch, cfg));
            selected.push_back(fr.branches.back().polyline);
        }
        fr.annotation = cfg.fusion ? fuse_branches(selected, pair.response, cfg) : VesselAnnotation{t, selected};
        fr.annotation.frame_index = t;
        key = VesselAnnotation{t, std::move(selected)};
        fr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        report.frames.push_back(std::move(fr));
    }
    return report;
}

void write_report(std::ostream& out, const TrackingReport& report) {
    out << "frames " << report.frames.size() << "\n";
    out << "fallbacks " << report.fallback_count() << "\n";
    out << "frame,key,branch,fallback,candidates,truncated,distance\n";
    const auto flags = out.flags();
    out << std::setprecision(6) << std::fixed;
    for (const auto& f : report.frames) {
        for (std::size_t b = 0; b < f.branches.size(); ++b) {
            const auto& r = f.branches[b];
            out << f.frame << ',' << f.key_frame << ',' << b << ',' << (r.fallback ? 1 : 0) << ',' << r.candidates << ','
                << (r.truncated ? 1 : 0) << ',' << r.distance << "\n";
        }
        if (f.registration_warning) out << "# frame " << f.frame << ": registration did not improve alignment\n";
    }
    out.flags(flags);
}

void write_timings(std::ostream& out, const TrackingReport& report) {
    out << "frame,seconds\n";
    double total = 0.0;
    for (const auto& f : report.frames) {
        out << f.frame << ',' << f.seconds << "\n";
        total += f.seconds;
    }
    out << "total," << total << "\n";
}

}  // namespace vtrack::tracker
