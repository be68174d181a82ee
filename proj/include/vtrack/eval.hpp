#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vtrack/geometry.hpp"

namespace vtrack::eval {

struct MatchCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

struct MetricTriple {
    double prec = 0.0;
    double sens = 0.0;
    double f1 = 0.0;
};

/// Distance-threshold coverage on 1-px resampled point sets: a predicted point is
/// a true positive when some ground-truth point lies within `rho`; ground-truth
/// points with no predicted point within `rho` are false negatives.
MatchCounts match_counts(const VesselAnnotation& pred, const VesselAnnotation& gt, double rho);

/// Same, on explicit point sets (no resampling).
MatchCounts match_points(const std::vector<Point>& pred, const std::vector<Point>& gt, double rho);

/// Branches resampled to 1-px spacing, concatenated.
std::vector<Point> rasterize_points(const VesselAnnotation& ann);

MetricTriple metrics(const MatchCounts& c);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population
};

/// One evaluated frame of one sequence.
struct FrameScore {
    std::string sequence;
    int frame = 0;
    MetricTriple m;
};

struct SequenceSummary {
    MeanStd prec, sens, f1;
    // Mean over sequences of the F1 at the first, middle and last tracked frame.
    double first_f1 = 0.0;
    double middle_f1 = 0.0;
    double last_f1 = 0.0;
    std::size_t frames = 0;
    std::size_t sequences = 0;
};

MeanStd mean_std(const std::vector<double>& values);

/// Scores are grouped by `sequence` in order of first appearance; within a
/// sequence, scores are taken in the given order. The middle frame of T tracked
/// frames has index floor((T - 1) / 2).
SequenceSummary aggregate(const std::vector<FrameScore>& scores);

/// `sequence,frame,prec,sens,f1` rows followed by a summary block.
void write_table(std::ostream& out, const std::vector<FrameScore>& scores, const SequenceSummary& summary);

}  // namespace vtrack::eval
