#include "vtrack/centerline.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "vtrack/filters.hpp"

namespace vtrack::centerline {
namespace {

constexpr std::array<int, 8> kRingX{0, 1, 1, 1, 0, -1, -1, -1};  // P2..P9, clockwise from north
constexpr std::array<int, 8> kRingY{-1, -1, 0, 1, 1, 1, 0, -1};

std::array<int, 8> ring(const BinaryMask& m, int x, int y) {
    std::array<int, 8> p{};
    for (int k = 0; k < 8; ++k) {
        const int u = x + kRingX[static_cast<std::size_t>(k)];
        const int v = y + kRingY[static_cast<std::size_t>(k)];
        p[static_cast<std::size_t>(k)] = m.contains(u, v) && m(u, v) ? 1 : 0;
    }
    return p;
}

/// Number of 8-connected groups formed by the set pixels of the 3x3 ring.
int ring_components(const std::array<int, 8>& p) {
    int set = 0;
    for (int v : p) set += v;
    if (set == 0) return 0;
    // Ring positions are adjacent to their ring successor; corner positions (odd
    // indices) additionally sit between two edge positions, which makes edge
    // pixels two steps apart adjacent only through the corner.
    std::array<int, 8> label{-1, -1, -1, -1, -1, -1, -1, -1};
    int comps = 0;
    for (int s = 0; s < 8; ++s) {
        if (!p[static_cast<std::size_t>(s)] || label[static_cast<std::size_t>(s)] >= 0) continue;
        std::array<int, 8> stack{};
        int top = 0;
        stack[static_cast<std::size_t>(top++)] = s;
        label[static_cast<std::size_t>(s)] = comps;
        while (top > 0) {
            const int c = stack[static_cast<std::size_t>(--top)];
            for (int k = 0; k < 8; ++k) {
                if (!p[static_cast<std::size_t>(k)] || label[static_cast<std::size_t>(k)] >= 0) continue;
                const int dx = kRingX[static_cast<std::size_t>(c)] - kRingX[static_cast<std::size_t>(k)];
                const int dy = kRingY[static_cast<std::size_t>(c)] - kRingY[static_cast<std::size_t>(k)];
                if (std::abs(dx) <= 1 && std::abs(dy) <= 1) {
                    label[static_cast<std::size_t>(k)] = comps;
                    stack[static_cast<std::size_t>(top++)] = k;
                }
            }
        }
        ++comps;
    }
    return comps;
}

bool zhang_suen_pass(BinaryMask& m, int step) {
    std::vector<std::pair<int, int>> kill;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y)) continue;
            const auto p = ring(m, x, y);
            int b = 0;
            for (int v : p) b += v;
            if (b < 2 || b > 6) continue;
            int a = 0;
            for (int k = 0; k < 8; ++k) a += (!p[static_cast<std::size_t>(k)] && p[static_cast<std::size_t>((k + 1) % 8)]);
            if (a != 1) continue;
            const int p2 = p[0], p4 = p[2], p6 = p[4], p8 = p[6];
            if (step == 0) {
                if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
            } else {
                if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
            }
            kill.emplace_back(x, y);
        }
    }
    for (auto [x, y] : kill) m(x, y) = 0;
    return !kill.empty();
}

}  // namespace

int neighbor_count(const BinaryMask& mask, int x, int y) {
    int n = 0;
    for (int v : ring(mask, x, y)) n += v;
    return n;
}

BinaryMask thin(BinaryMask mask) {
    for (;;) {
        const bool a = zhang_suen_pass(mask, 0);
        const bool b = zhang_suen_pass(mask, 1);
        if (!a && !b) break;
    }
    // Drop pixels whose neighbours stay 8-connected without them.
    for (bool changed = true; changed;) {
        changed = false;
        for (int y = 0; y < mask.height(); ++y) {
            for (int x = 0; x < mask.width(); ++x) {
                if (!mask(x, y)) continue;
                const auto p = ring(mask, x, y);
                int n = 0;
                for (int v : p) n += v;
                if (n < 2 || n > 6 || ring_components(p) != 1) continue;
                // A pixel with neighbours only on one side is a line end; keep it
                // unless a 4-neighbour pair makes it a corner of a triangle.
                bool corner = false;
                for (int k = 0; k < 8; k += 2) {
                    if (p[static_cast<std::size_t>(k)] && p[static_cast<std::size_t>((k + 2) % 8)]) corner = true;
                }
                if (!corner && n < 3) continue;
                mask(x, y) = 0;
                changed = true;
            }
        }
    }
    return mask;
}

RidgeResponse vesselness(const ImageFrame& frame, const std::vector<double>& scales) {
    if (scales.empty()) throw Error("vesselness needs at least one scale");
    const int w = frame.width();
    const int h = frame.height();
    RidgeResponse out{Grid<double>(w, h, 0.0), Grid<double>(w, h, 0.0), Grid<double>(w, h, scales.front())};
    constexpr double beta = 0.5;

    for (double s : scales) {
        if (!(s >= 0.5)) throw Error("vesselness scales must be >= 0.5");
        const auto g0 = filters::gaussian_kernel(s, 0);
        const auto g1 = filters::gaussian_kernel(s, 1);
        const auto g2 = filters::gaussian_kernel(s, 2);
        const Grid<double> ixx = filters::convolve_separable(frame.pixels(), g2, g0);
        const Grid<double> iyy = filters::convolve_separable(frame.pixels(), g0, g2);
        const Grid<double> ixy = filters::convolve_separable(frame.pixels(), g1, g1);
        const double norm = s * s;

        Grid<double> l1(w, h), l2(w, h), theta(w, h);
        double max_s = 0.0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double a = norm * ixx(x, y);
                const double c = norm * iyy(x, y);
                const double b = norm * ixy(x, y);
                const double mean = 0.5 * (a + c);
                const double rad = std::hypot(0.5 * (a - c), b);
                const double hi = mean + rad;
                const double lo = mean - rad;
                const bool hi_major = std::abs(hi) >= std::abs(lo);
                l2(x, y) = hi_major ? hi : lo;
                l1(x, y) = hi_major ? lo : hi;
                // Direction of the algebraically larger eigenvector, rotated onto the vessel axis.
                double t = 0.5 * std::atan2(2.0 * b, a - c) + 0.5 * std::numbers::pi;
                t = std::fmod(t, std::numbers::pi);
                if (t < 0.0) t += std::numbers::pi;
                theta(x, y) = t;
                max_s = std::max(max_s, std::hypot(hi, lo));
            }
        }
        if (max_s < 1e-9) continue;  // no structure at this scale
        const double c = 0.5 * max_s;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double major = l2(x, y);
                if (major <= 0.0) continue;  // bright ridge or blob
                const double rb = l1(x, y) / major;
                const double st = std::hypot(l1(x, y), major);
                const double v = std::exp(-rb * rb / (2.0 * beta * beta)) * (1.0 - std::exp(-st * st / (2.0 * c * c)));
                if (v > out.response(x, y)) {
                    out.response(x, y) = v;
                    out.orientation(x, y) = theta(x, y);
                    out.best_scale(x, y) = s;
                }
            }
        }
    }
    double peak = 0.0;
    for (double v : out.response.values()) peak = std::max(peak, v);
    if (peak > 0.0)
        for (double& v : out.response.values()) v /= peak;
    return out;
}

double auto_threshold(const RidgeResponse& resp, const BinaryMask& range, double floor) {
    std::vector<double> values;
    for (std::size_t i = 0; i < resp.response.size(); ++i) {
        const double v = resp.response.values()[i];
        if (range.values()[i] && v > 0.0) values.push_back(v);
    }
    return std::max(floor, filters::otsu_threshold(values));
}

BinaryMask extract_centerline(const RidgeResponse& resp, const BinaryMask& range, std::optional<double> threshold) {
    if (!range.same_shape(resp.response)) throw Error("range mask and response differ in size");
    const double thr = threshold ? *threshold : auto_threshold(resp, range);
    const int w = range.width();
    const int h = range.height();
    BinaryMask keep(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double r = resp.response(x, y);
            if (!range(x, y) || r <= 0.0 || r < thr) continue;
            const double t = resp.orientation(x, y);
            const double nx = -std::sin(t);
            const double ny = std::cos(t);
            const double ahead = sample_bilinear(resp.response, x + nx, y + ny);
            const double behind = sample_bilinear(resp.response, x - nx, y - ny);
            // Strict on one side so a two-pixel plateau keeps exactly one pixel.
            if (r >= ahead && r > behind) keep(x, y) = 1;
        }
    }
    return thin(std::move(keep));
}

}  // namespace vtrack::centerline
