#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vtrack/config.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

namespace vtrack::matching {

/// Concatenated per-sample orientation histograms; every block has unit L2 norm.
using DescriptorVector = std::vector<double>;

/// Pixel-aligned window [x0, x1] x [y0, y1]; may extend past the frame.
struct Region {
    int x0, y0, x1, y1;
};

/// Dense DAISY maps for one frame over a region of interest.
///
/// Gradient-orientation maps are smoothed incrementally to one layer per ring.
/// Pixels outside the frame are mirrored, so descriptors near the border are
/// defined. Values inside the region do not depend on how large the region is.
class DaisyField {
public:
    DaisyField(const ImageFrame& frame, const DaisyParams& params);
    DaisyField(const ImageFrame& frame, const DaisyParams& params, Region roi);

    /// Descriptor at `p`; `p` must lie inside the region of interest.
    DescriptorVector at(Point p) const;
    const DaisyParams& params() const noexcept { return params_; }
    const Region& region() const noexcept { return roi_; }

private:
    void histogram(int layer, double x, double y, double* out) const;

    DaisyParams params_;
    Region roi_;
    int origin_x_ = 0;  // domain pixel (0,0) in frame coordinates
    int origin_y_ = 0;
    std::vector<Grid<float>> layers_;  // layer * bins + bin
};

/// Single-point descriptor (builds a local field).
DescriptorVector descriptor(const ImageFrame& frame, Point p, const DaisyParams& params = {});

/// Region covering every polyline point plus `margin` pixels.
Region bounding_region(std::span<const Polyline> lines, int margin = 1);

/// M x L matrix of nonnegative costs.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }
    CostMatrix transposed() const;

private:
    std::size_t rows_, cols_;
    std::vector<double> v_;
};

/// Zero-based index pairs (i, j) from (0,0) to (M-1, L-1).
using WarpingPath = std::vector<std::pair<std::size_t, std::size_t>>;

struct DtwResult {
    double distance = 0.0;
    WarpingPath path;
};

/// Cumulative-cost dynamic programming with backtracking; ties prefer the
/// diagonal step, then the step in i, then the step in j.
DtwResult dtw(const CostMatrix& d);

/// True when the path satisfies the boundary, continuity and monotonicity
/// constraints and max(M,L) <= K <= M+L.
bool is_valid_warping_path(const WarpingPath& path, std::size_t rows, std::size_t cols);

double euclidean(const DescriptorVector& a, const DescriptorVector& b);

std::vector<DescriptorVector> describe(const DaisyField& field, const Polyline& points);

CostMatrix cost_matrix(std::span<const DescriptorVector> guided, std::span<const DescriptorVector> candidate);
CostMatrix cost_matrix(const ImageFrame& key, const ImageFrame& cur, const Polyline& guided, const Polyline& candidate,
                       const DaisyParams& params = {});

struct Selection {
    std::size_t index = 0;
    Polyline best;
    double distance = 0.0;
    std::size_t path_length = 0;  // warping path length of the selected candidate
    std::vector<double> distances;
};

/// Candidate with the smallest warping distance to the guided branch (first one on
/// ties). `guided` is read on `key`, candidates on `cur`; both are resampled to
/// `spacing` before scoring. Throws when there are no candidates.
Selection select_branch(const DaisyField& key, const DaisyField& cur, const Polyline& guided,
                        std::span<const Polyline> candidates, double spacing = 1.0);
Selection select_branch(const ImageFrame& key, const ImageFrame& cur, const Polyline& guided,
                        std::span<const Polyline> candidates, const DaisyParams& params = {}, double spacing = 1.0);

}  // namespace vtrack::matching
