#include "vtrack/preprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "vtrack/filters.hpp"

namespace vtrack::preprocess {
namespace {

/// Regular lattice of block centers for one pyramid level.
struct BlockGrid {
    int nx = 0;
    int ny = 0;
    int half = 0;
    int spacing = 1;

    double center(int k) const { return half + static_cast<double>(k) * spacing; }
};

BlockGrid make_block_grid(int width, int height, int block) {
    BlockGrid g;
    g.half = block / 2;
    g.spacing = std::max(1, block / 2);
    g.nx = width >= block ? (width - block) / g.spacing + 1 : 0;
    g.ny = height >= block ? (height - block) / g.spacing + 1 : 0;
    return g;
}

/// Summed-area tables for O(1) block mean and variance.
class IntegralImage {
public:
    explicit IntegralImage(const Grid<double>& img)
        : w_(img.width() + 1), sum_(static_cast<std::size_t>(w_) * (img.height() + 1), 0.0),
          sq_(sum_.size(), 0.0) {
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                const double v = img(x, y);
                at(sum_, x + 1, y + 1) = v + at(sum_, x, y + 1) + at(sum_, x + 1, y) - at(sum_, x, y);
                at(sq_, x + 1, y + 1) = v * v + at(sq_, x, y + 1) + at(sq_, x + 1, y) - at(sq_, x, y);
            }
        }
    }
    /// Sum and sum of squares over [x0, x0+n) x [y0, y0+n).
    std::pair<double, double> block(int x0, int y0, int n) const {
        auto box = [&](const std::vector<double>& t) {
            return at(t, x0 + n, y0 + n) - at(t, x0, y0 + n) - at(t, x0 + n, y0) + at(t, x0, y0);
        };
        return {box(sum_), box(sq_)};
    }

private:
    double& at(std::vector<double>& t, int x, int y) { return t[static_cast<std::size_t>(y) * w_ + x]; }
    double at(const std::vector<double>& t, int x, int y) const { return t[static_cast<std::size_t>(y) * w_ + x]; }

    int w_;
    std::vector<double> sum_;
    std::vector<double> sq_;
};

double parabolic_offset(double left, double mid, double right) {
    const double denom = left - 2.0 * mid + right;
    if (denom >= 0.0) return 0.0;
    return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

/// Dense field at a level from node displacements.
DeformationField densify(const BlockGrid& g, const Grid<double>& ndx, const Grid<double>& ndy, int w, int h) {
    DeformationField f(w, h);
    for (int y = 0; y < h; ++y) {
        const double v = std::clamp((y - g.half) / static_cast<double>(g.spacing), 0.0, g.ny - 1.0);
        for (int x = 0; x < w; ++x) {
            const double u = std::clamp((x - g.half) / static_cast<double>(g.spacing), 0.0, g.nx - 1.0);
            f.dx(x, y) = sample_bilinear(ndx, u, v);
            f.dy(x, y) = sample_bilinear(ndy, u, v);
        }
    }
    return f;
}

/// One level of block matching, seeded by `prior` (in this level's pixels).
DeformationField match_level(const Grid<double>& key, const Grid<double>& cur, const DeformationField& prior,
                             const RegistrationParams& params, double max_disp) {
    const int w = key.width();
    const int h = key.height();
    const int n = params.block_size;
    const BlockGrid g = make_block_grid(w, h, n);
    if (g.nx == 0 || g.ny == 0) return prior;

    const IntegralImage cur_sums(cur);
    const double pixels = static_cast<double>(n) * n;
    Grid<double> ndx(g.nx, g.ny), ndy(g.nx, g.ny), weight(g.nx, g.ny), pdx(g.nx, g.ny), pdy(g.nx, g.ny);
    std::vector<double> block(static_cast<std::size_t>(n) * n);
    const int r = params.search_radius;
    std::vector<double> scores(static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int cx = static_cast<int>(g.center(i));
            const int cy = static_cast<int>(g.center(j));
            const int x0 = cx - g.half;
            const int y0 = cy - g.half;
            const Point pred = prior.displacement({static_cast<double>(cx), static_cast<double>(cy)});
            pdx(i, j) = pred.x;
            pdy(i, j) = pred.y;

            double mean = 0.0;
            for (int v = 0; v < n; ++v)
                for (int u = 0; u < n; ++u) mean += (block[static_cast<std::size_t>(v * n + u)] = key(x0 + u, y0 + v));
            mean /= pixels;
            double var = 0.0;
            for (double& b : block) {
                b -= mean;
                var += b * b;
            }
            if (var < 1e-10 * pixels) continue;  // flat block carries no information

            const int sx0 = static_cast<int>(std::lround(pred.x));
            const int sy0 = static_cast<int>(std::lround(pred.y));
            double best = -2.0;
            int best_sx = 0, best_sy = 0;
            std::fill(scores.begin(), scores.end(), std::numeric_limits<double>::quiet_NaN());
            for (int sy = -r; sy <= r; ++sy) {
                for (int sx = -r; sx <= r; ++sx) {
                    const int dx = sx0 + sx;
                    const int dy = sy0 + sy;
                    if (std::abs(dx) > max_disp || std::abs(dy) > max_disp) continue;
                    const int bx = x0 + dx;
                    const int by = y0 + dy;
                    if (bx < 0 || by < 0 || bx + n > w || by + n > h) continue;
                    const auto [s, sq] = cur_sums.block(bx, by, n);
                    const double cvar = sq - s * s / pixels;
                    if (cvar < 1e-10 * pixels) continue;
                    double cross = 0.0;
                    for (int v = 0; v < n; ++v) {
                        const double* kb = &block[static_cast<std::size_t>(v * n)];
                        for (int u = 0; u < n; ++u) cross += kb[u] * cur(bx + u, by + v);
                    }
                    const double ncc = cross / std::sqrt(var * cvar);
                    scores[static_cast<std::size_t>((sy + r) * (2 * r + 1) + (sx + r))] = ncc;
                    if (ncc > best) {
                        best = ncc;
                        best_sx = sx;
                        best_sy = sy;
                    }
                }
            }
            if (best < params.min_ncc) continue;
            auto score = [&](int sx, int sy) {
                if (std::abs(sx) > r || std::abs(sy) > r) return std::numeric_limits<double>::quiet_NaN();
                return scores[static_cast<std::size_t>((sy + r) * (2 * r + 1) + (sx + r))];
            };
            double fx = 0.0, fy = 0.0;
            const double l = score(best_sx - 1, best_sy), rr = score(best_sx + 1, best_sy);
            const double t = score(best_sx, best_sy - 1), b = score(best_sx, best_sy + 1);
            if (!std::isnan(l) && !std::isnan(rr)) fx = parabolic_offset(l, best, rr);
            if (!std::isnan(t) && !std::isnan(b)) fy = parabolic_offset(t, best, b);
            ndx(i, j) = sx0 + best_sx + fx;
            ndy(i, j) = sy0 + best_sy + fy;
            weight(i, j) = best;
        }
    }

    // Confidence-weighted (normalized) Gaussian smoothing; unsupported nodes keep the prior.
    Grid<double> wdx(g.nx, g.ny), wdy(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            wdx(i, j) = weight(i, j) * ndx(i, j);
            wdy(i, j) = weight(i, j) * ndy(i, j);
        }
    const auto kernel = filters::gaussian_kernel(params.smoothing_std, 0);
    const Grid<double> sw = filters::convolve_separable(weight, kernel, kernel);
    const Grid<double> sdx = filters::convolve_separable(wdx, kernel, kernel);
    const Grid<double> sdy = filters::convolve_separable(wdy, kernel, kernel);
    constexpr double prior_weight = 1e-3;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double denom = sw(i, j) + prior_weight;
            ndx(i, j) = std::clamp((sdx(i, j) + prior_weight * pdx(i, j)) / denom, -max_disp, max_disp);
            ndy(i, j) = std::clamp((sdy(i, j) + prior_weight * pdy(i, j)) / denom, -max_disp, max_disp);
        }
    }
    return densify(g, ndx, ndy, w, h);
}

DeformationField upsample_field(const DeformationField& coarse, int w, int h) {
    DeformationField f(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Point d = coarse.displacement({x / 2.0, y / 2.0});
            f.dx(x, y) = 2.0 * d.x;
            f.dy(x, y) = 2.0 * d.y;
        }
    }
    return f;
}

}  // namespace

double DeformationField::max_abs() const {
    double m = 0.0;
    for (double v : dx.values()) m = std::max(m, std::abs(v));
    for (double v : dy.values()) m = std::max(m, std::abs(v));
    return m;
}

Grid<double> warp_to_current(const ImageFrame& key, const DeformationField& field) {
    if (!field.dx.same_shape(key.width(), key.height())) throw Error("field and frame dimensions differ");
    Grid<double> out(key.width(), key.height());
    for (int y = 0; y < key.height(); ++y)
        for (int x = 0; x < key.width(); ++x)
            out(x, y) = sample_bilinear(key.pixels(), x - field.dx(x, y), y - field.dy(x, y));
    return out;
}

double mean_squared_difference(const Grid<double>& a, const Grid<double>& b) {
    if (!a.same_shape(b)) throw Error("grids differ in size");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.values()[i] - b.values()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

RegistrationResult register_frames(const ImageFrame& key, const ImageFrame& cur, const RegistrationParams& params) {
    if (key.width() != cur.width() || key.height() != cur.height())
        throw Error("key and current frames differ in size");
    RegistrationResult result;
    result.field = DeformationField(key.width(), key.height());
    result.mse_identity = mean_squared_difference(key.pixels(), cur.pixels());
    result.mse_registered = result.mse_identity;
    if (result.mse_identity <= 1e-12) return result;

    std::vector<Grid<double>> key_pyr{key.pixels()};
    std::vector<Grid<double>> cur_pyr{cur.pixels()};
    for (int l = 1; l < params.levels; ++l) {
        key_pyr.push_back(filters::pyramid_down(key_pyr.back()));
        cur_pyr.push_back(filters::pyramid_down(cur_pyr.back()));
    }
    DeformationField field;
    for (int l = params.levels - 1; l >= 0; --l) {
        const auto& k = key_pyr[static_cast<std::size_t>(l)];
        const double max_disp = params.max_displacement / std::ldexp(1.0, l);
        if (field.dx.empty()) {
            field = DeformationField(k.width(), k.height());
        } else {
            field = upsample_field(field, k.width(), k.height());
        }
        field = match_level(k, cur_pyr[static_cast<std::size_t>(l)], field, params, max_disp);
    }

    const double mse = mean_squared_difference(warp_to_current(key, field), cur.pixels());
    if (!(mse < result.mse_identity)) {
        result.warning = true;
        return result;
    }
    result.field = std::move(field);
    result.mse_registered = mse;
    return result;
}

Polyline map_polyline(const Polyline& p, const DeformationField& field) {
    Polyline out;
    out.points.reserve(p.size());
    const double xmax = field.width() - 1.0;
    const double ymax = field.height() - 1.0;
    for (const Point& q : p.points) {
        const Point d = field.displacement(q);
        out.points.push_back({std::clamp(q.x + d.x, 0.0, xmax), std::clamp(q.y + d.y, 0.0, ymax)});
    }
    return out;
}

VesselAnnotation map_annotation(const VesselAnnotation& ann, const DeformationField& field) {
    VesselAnnotation out;
    out.frame_index = ann.frame_index;
    for (const auto& b : ann.branches) out.branches.push_back(map_polyline(b, field));
    return out;
}

BinaryMask tracking_range(const Polyline& branch, double sigma, int width, int height) {
    if (!(sigma >= 1.0)) throw Error("tracking range sigma must be >= 1");
    BinaryMask seeds(width, height, 0);
    rasterize(branch, seeds);
    // Exact Euclidean threshold around each seed pixel; seeds are sparse.
    BinaryMask mask(width, height, 0);
    const int r = static_cast<int>(std::floor(sigma));
    const double r2 = sigma * sigma;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!seeds(x, y)) continue;
            for (int v = -r; v <= r; ++v) {
                for (int u = -r; u <= r; ++u) {
                    if (u * u + v * v > r2 || !mask.contains(x + u, y + v)) continue;
                    mask(x + u, y + v) = 1;
                }
            }
        }
    }
    return mask;
}

void write_field(const std::string& path, const DeformationField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write field file " + path);
    out << "DFIELD " << field.width() << ' ' << field.height() << '\n';
    auto put = [&](const Grid<double>& g) {
        for (double v : g.values()) {
            auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
            unsigned char bytes[4] = {static_cast<unsigned char>(bits), static_cast<unsigned char>(bits >> 8),
                                      static_cast<unsigned char>(bits >> 16), static_cast<unsigned char>(bits >> 24)};
            out.write(reinterpret_cast<const char*>(bytes), 4);
        }
    };
    put(field.dx);
    put(field.dy);
    if (!out) throw Error("failed writing field file " + path);
}

DeformationField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open field file " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic;
    int w = 0, h = 0;
    if (!(hs >> magic >> w >> h) || magic != "DFIELD" || w <= 0 || h <= 0)
        throw Error("malformed field header in " + path);
    DeformationField field(w, h);
    auto get = [&](Grid<double>& g) {
        for (double& v : g.values()) {
            unsigned char bytes[4];
            if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw Error("truncated field file " + path);
            const std::uint32_t bits = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) |
                                       (static_cast<std::uint32_t>(bytes[3]) << 24);
            v = std::bit_cast<float>(bits);
            if (!std::isfinite(v)) throw Error("non-finite displacement in " + path);
        }
    };
    get(field.dx);
    get(field.dy);
    return field;
}

}  // namespace vtrack::preprocess
