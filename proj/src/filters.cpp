#include "vtrack/filters.hpp"

#include <cmath>
#include <numeric>

namespace vtrack::filters {

std::vector<double> gaussian_kernel(double sigma, int order) {
    if (!(sigma > 0.0)) throw Error("gaussian sigma must be positive");
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> g(static_cast<std::size_t>(2 * radius + 1));
    const double s2 = sigma * sigma;
    for (int i = -radius; i <= radius; ++i) g[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / s2);
    const double norm = std::accumulate(g.begin(), g.end(), 0.0);
    for (double& v : g) v /= norm;
    if (order == 0) return g;

    std::vector<double> k(g.size());
    for (int i = -radius; i <= radius; ++i) {
        const double x = i;
        const double base = g[static_cast<std::size_t>(i + radius)];
        // Correlation kernels: out(x) = sum k(i) * in(x + i).
        k[static_cast<std::size_t>(i + radius)] =
            order == 1 ? (x / s2) * base : (x * x / (s2 * s2) - 1.0 / s2) * base;
    }
    if (order == 2) {
        const double mean = std::accumulate(k.begin(), k.end(), 0.0) / static_cast<double>(k.size());
        for (double& v : k) v -= mean;
        // Rescale so a unit parabola x^2/2 has second derivative 1.
        double m2 = 0.0;
        for (int i = -radius; i <= radius; ++i) m2 += k[static_cast<std::size_t>(i + radius)] * 0.5 * i * i;
        for (double& v : k) v /= m2;
    } else if (order == 1) {
        double m1 = 0.0;
        for (int i = -radius; i <= radius; ++i) m1 += k[static_cast<std::size_t>(i + radius)] * i;
        for (double& v : k) v /= m1;
    } else {
        throw Error("gaussian derivative order must be 0, 1 or 2");
    }
    return k;
}

Grid<double> convolve_separable(const Grid<double>& in, const std::vector<double>& kx,
                                const std::vector<double>& ky) {
    const int w = in.width();
    const int h = in.height();
    const int rx = static_cast<int>(kx.size() / 2);
    const int ry = static_cast<int>(ky.size() / 2);
    Grid<double> tmp(w, h);
    std::vector<double> row(static_cast<std::size_t>(w + 2 * rx));
    for (int y = 0; y < h; ++y) {
        for (int i = -rx; i < w + rx; ++i) row[static_cast<std::size_t>(i + rx)] = in(reflect_index(i, w), y);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kx.size(); ++k) acc += kx[k] * row[static_cast<std::size_t>(x) + k];
            tmp(x, y) = acc;
        }
    }
    Grid<double> out(w, h);
    std::vector<double> col(static_cast<std::size_t>(h + 2 * ry));
    for (int x = 0; x < w; ++x) {
        for (int i = -ry; i < h + ry; ++i) col[static_cast<std::size_t>(i + ry)] = tmp(x, reflect_index(i, h));
        for (int y = 0; y < h; ++y) {
            double acc = 0.0;
            for (std::size_t k = 0; k < ky.size(); ++k) acc += ky[k] * col[static_cast<std::size_t>(y) + k];
            out(x, y) = acc;
        }
    }
    return out;
}

Grid<double> gaussian_blur(const Grid<double>& in, double sigma) {
    const auto g = gaussian_kernel(sigma, 0);
    return convolve_separable(in, g, g);
}

Grid<double> pyramid_down(const Grid<double>& in) {
    const Grid<double> blurred = gaussian_blur(in, 1.0);
    const int w = std::max(1, in.width() / 2);
    const int h = std::max(1, in.height() / 2);
    Grid<double> out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out(x, y) = blurred(std::min(2 * x, in.width() - 1), std::min(2 * y, in.height() - 1));
    return out;
}

double otsu_threshold(const std::vector<double>& values) {
    constexpr int bins = 256;
    if (values.empty()) return 0.0;
    std::vector<double> hist(bins, 0.0);
    for (double v : values) {
        const int b = std::clamp(static_cast<int>(v * bins), 0, bins - 1);
        hist[static_cast<std::size_t>(b)] += 1.0;
    }
    const double total = static_cast<double>(values.size());
    double sum_all = 0.0;
    for (int b = 0; b < bins; ++b) sum_all += b * hist[static_cast<std::size_t>(b)];
    double w0 = 0.0, sum0 = 0.0, best = -1.0;
    int best_bin = 0;
    for (int b = 0; b < bins; ++b) {
        w0 += hist[static_cast<std::size_t>(b)];
        if (w0 == 0.0) continue;
        const double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += b * hist[static_cast<std::size_t>(b)];
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_bin = b;
        }
    }
    return (best_bin + 1) / static_cast<double>(bins);
}

}  // namespace vtrack::filters
