#include "vtrack/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vtrack/filters.hpp"

namespace vtrack::matching {
namespace {

std::vector<double> layer_sigmas(const DaisyParams& p) {
    std::vector<double> s;
    for (int i = 0; i < p.rings; ++i) s.push_back(p.radius * (i + 1) / (2.0 * p.rings));
    return s;
}

int kernel_radius(double sigma) { return std::max(1, static_cast<int>(std::ceil(3.0 * sigma))); }

int support_margin(const DaisyParams& p) {
    int margin = static_cast<int>(std::ceil(p.radius)) + 3;
    double prev = 0.0;
    for (double s : layer_sigmas(p)) {
        margin += kernel_radius(std::sqrt(s * s - prev * prev));
        prev = s;
    }
    return margin;
}

}  // namespace

DaisyField::DaisyField(const ImageFrame& frame, const DaisyParams& params)
    : DaisyField(frame, params, Region{0, 0, frame.width() - 1, frame.height() - 1}) {}

DaisyField::DaisyField(const ImageFrame& frame, const DaisyParams& params, Region roi)
    : params_(params), roi_(roi) {
    if (params.rings < 1 || params.directions < 1 || params.bins < 1 || !(params.radius > 0.0))
        throw Error("invalid DAISY parameters");
    if (roi.x1 < roi.x0 || roi.y1 < roi.y0) throw Error("empty DAISY region");
    const int margin = support_margin(params);
    origin_x_ = roi.x0 - margin;
    origin_y_ = roi.y0 - margin;
    const int dw = roi.x1 - roi.x0 + 1 + 2 * margin;
    const int dh = roi.y1 - roi.y0 + 1 + 2 * margin;

    Grid<double> img(dw, dh);
    for (int y = 0; y < dh; ++y)
        for (int x = 0; x < dw; ++x)
            img(x, y) = frame(reflect_index(origin_x_ + x, frame.width()), reflect_index(origin_y_ + y, frame.height()));

    const int bins = params.bins;
    std::vector<Grid<double>> orient(static_cast<std::size_t>(bins), Grid<double>(dw, dh, 0.0));
    std::vector<double> cs(static_cast<std::size_t>(bins)), sn(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        cs[static_cast<std::size_t>(b)] = std::cos(2.0 * std::numbers::pi * b / bins);
        sn[static_cast<std::size_t>(b)] = std::sin(2.0 * std::numbers::pi * b / bins);
    }
    for (int y = 0; y < dh; ++y) {
        for (int x = 0; x < dw; ++x) {
            const double gx = 0.5 * (img(std::min(x + 1, dw - 1), y) - img(std::max(x - 1, 0), y));
            const double gy = 0.5 * (img(x, std::min(y + 1, dh - 1)) - img(x, std::max(y - 1, 0)));
            for (int b = 0; b < bins; ++b)
                orient[static_cast<std::size_t>(b)](x, y) =
                    std::max(0.0, gx * cs[static_cast<std::size_t>(b)] + gy * sn[static_cast<std::size_t>(b)]);
        }
    }

    layers_.reserve(static_cast<std::size_t>(params.rings * bins));
    double prev = 0.0;
    std::vector<Grid<double>> current = std::move(orient);
    for (double s : layer_sigmas(params)) {
        const auto k = filters::gaussian_kernel(std::sqrt(s * s - prev * prev), 0);
        prev = s;
        for (auto& g : current) {
            g = filters::convolve_separable(g, k, k);
            Grid<float> f(dw, dh);
            for (std::size_t i = 0; i < g.size(); ++i) f.values()[i] = static_cast<float>(g.values()[i]);
            layers_.push_back(std::move(f));
        }
    }
}

void DaisyField::histogram(int layer, double x, double y, double* out) const {
    const int bins = params_.bins;
    double norm = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double v = sample_bilinear(layers_[static_cast<std::size_t>(layer * bins + b)], x, y);
        out[b] = v;
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
        const double u = 1.0 / std::sqrt(static_cast<double>(bins));
        for (int b = 0; b < bins; ++b) out[b] = u;
        return;
    }
    for (int b = 0; b < bins; ++b) out[b] /= norm;
}

DescriptorVector DaisyField::at(Point p) const {
    if (p.x < roi_.x0 - 0.5 || p.x > roi_.x1 + 0.5 || p.y < roi_.y0 - 0.5 || p.y > roi_.y1 + 0.5)
        throw Error("descriptor requested outside the DAISY region");
    DescriptorVector d(static_cast<std::size_t>(params_.dimension()));
    const double cx = p.x - origin_x_;
    const double cy = p.y - origin_y_;
    double* out = d.data();
    histogram(0, cx, cy, out);
    out += params_.bins;
    for (int ring = 0; ring < params_.rings; ++ring) {
        const double r = params_.radius * (ring + 1) / params_.rings;
        for (int t = 0; t < params_.directions; ++t) {
            const double a = 2.0 * std::numbers::pi * t / params_.directions;
            histogram(ring, cx + r * std::cos(a), cy + r * std::sin(a), out);
            out += params_.bins;
        }
    }
    return d;
}

DescriptorVector descriptor(const ImageFrame& frame, Point p, const DaisyParams& params) {
    const int x = static_cast<int>(std::floor(p.x));
    const int y = static_cast<int>(std::floor(p.y));
    return DaisyField(frame, params, Region{x, y, x + 1, y + 1}).at(p);
}

Region bounding_region(std::span<const Polyline> lines, int margin) {
    Region r{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), std::numeric_limits<int>::min(),
             std::numeric_limits<int>::min()};
    for (const auto& l : lines)
        for (const Point& p : l.points) {
            r.x0 = std::min(r.x0, static_cast<int>(std::floor(p.x)) - margin);
            r.y0 = std::min(r.y0, static_cast<int>(std::floor(p.y)) - margin);
            r.x1 = std::max(r.x1, static_cast<int>(std::ceil(p.x)) + margin);
            r.y1 = std::max(r.y1, static_cast<int>(std::ceil(p.y)) + margin);
        }
    if (r.x0 > r.x1) throw Error("bounding region of no points");
    return r;
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), v_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw Error("cost matrix needs at least one row and column");
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw Error("cost matrix needs at least one row and column");
    CostMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw Error("ragged cost matrix");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!(rows[i][j] >= 0.0) || !std::isfinite(rows[i][j])) throw Error("cost entries must be finite and >= 0");
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

CostMatrix CostMatrix::transposed() const {
    CostMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DtwResult dtw(const CostMatrix& d) {
    const std::size_t m = d.rows();
    const std::size_t l = d.cols();
    CostMatrix acc(m, l);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            double prev = 0.0;
            if (i == 0 && j > 0) {
                prev = acc(i, j - 1);
            } else if (i > 0 && j == 0) {
                prev = acc(i - 1, j);
            } else if (i > 0 && j > 0) {
                prev = std::min({acc(i - 1, j), acc(i, j - 1), acc(i - 1, j - 1)});
            }
            acc(i, j) = d(i, j) + prev;
        }
    }
    DtwResult r;
    r.distance = acc(m - 1, l - 1);
    std::size_t i = m - 1, j = l - 1;
    r.path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = acc(i - 1, j - 1);
            const double up = acc(i - 1, j);
            const double left = acc(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        r.path.emplace_back(i, j);
    }
    std::reverse(r.path.begin(), r.path.end());
    return r;
}

bool is_valid_warping_path(const WarpingPath& path, std::size_t rows, std::size_t cols) {
    if (path.empty()) return false;
    if (path.front() != std::pair<std::size_t, std::size_t>{0, 0}) return false;
    if (path.back() != std::pair<std::size_t, std::size_t>{rows - 1, cols - 1}) return false;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const auto [i0, j0] = path[k - 1];
        const auto [i1, j1] = path[k];
        if (i1 < i0 || j1 < j0) return false;              // monotonicity
        if (i1 - i0 > 1 || j1 - j0 > 1) return false;      // continuity
        if (i1 == i0 && j1 == j0) return false;
    }
    return path.size() >= std::max(rows, cols) && path.size() <= rows + cols;
}

double euclidean(const DescriptorVector& a, const DescriptorVector& b) {
    if (a.size() != b.size()) throw Error("descriptor dimensions differ");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

std::vector<DescriptorVector> describe(const DaisyField& field, const Polyline& points) {
    std::vector<DescriptorVector> out;
    out.reserve(points.size());
    for (const Point& p : points.points) out.push_back(field.at(p));
    return out;
}

CostMatrix cost_matrix(std::span<const DescriptorVector> guided, std::span<const DescriptorVector> candidate) {
    CostMatrix m(guided.size(), candidate.size());
    for (std::size_t i = 0; i < guided.size(); ++i)
        for (std::size_t j = 0; j < candidate.size(); ++j) m(i, j) = euclidean(guided[i], candidate[j]);
    return m;
}

CostMatrix cost_matrix(const ImageFrame& key, const ImageFrame& cur, const Polyline& guided, const Polyline& candidate,
                       const DaisyParams& params) {
    const DaisyField kf(key, params, bounding_region(std::span<const Polyline>(&guided, 1)));
    const DaisyField cf(cur, params, bounding_region(std::span<const Polyline>(&candidate, 1)));
    const auto a = describe(kf, guided);
    const auto b = describe(cf, candidate);
    return cost_matrix(a, b);
}

Selection select_branch(const DaisyField& key, const DaisyField& cur, const Polyline& guided,
                        std::span<const Polyline> candidates, double spacing) {
    if (candidates.empty()) throw Error("no candidate branches to select from");
    const auto guided_desc = describe(key, resample_polyline(guided, spacing));
    Selection sel;
    sel.distance = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto cand_desc = describe(cur, resample_polyline(candidates[c], spacing));
        const DtwResult r = dtw(cost_matrix(guided_desc, cand_desc));
        sel.distances.push_back(r.distance);
        if (r.distance < sel.distance) {
            sel.distance = r.distance;
            sel.path_length = r.path.size();
            sel.index = c;
        }
    }
    sel.best = candidates[sel.index];
    return sel;
}

Selection select_branch(const ImageFrame& key, const ImageFrame& cur, const Polyline& guided,
                        std::span<const Polyline> candidates, const DaisyParams& params, double spacing) {
    if (candidates.empty()) throw Error("no candidate branches to select from");
    const DaisyField kf(key, params, bounding_region(std::span<const Polyline>(&guided, 1)));
    const DaisyField cf(cur, params, bounding_region(candidates));
    return select_branch(kf, cf, guided, candidates, spacing);
}

}  // namespace vtrack::matching
