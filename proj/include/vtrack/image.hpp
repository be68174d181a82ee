#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "vtrack/error.hpp"

namespace vtrack {

/// Row-major 2D grid.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width <= 0 || height <= 0) throw Error("grid dimensions must be positive");
        values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return values_.empty(); }
    std::size_t size() const noexcept { return values_.size(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    bool same_shape(int w, int h) const noexcept { return w == width_ && h == height_; }
    template <typename U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return same_shape(other.width(), other.height());
    }

    T& operator()(int x, int y) { return values_[index(x, y)]; }
    const T& operator()(int x, int y) const { return values_[index(x, y)]; }

    std::span<T> values() noexcept { return values_; }
    std::span<const T> values() const noexcept { return values_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> values_;
};

/// One-byte-per-pixel boolean grid; nonzero = set.
using BinaryMask = Grid<std::uint8_t>;

/// Grayscale frame with intensities in [0,1].
class ImageFrame {
public:
    ImageFrame() = default;
    /// Throws if any intensity is outside [0,1] or not finite.
    explicit ImageFrame(Grid<double> pixels) : pixels_(std::move(pixels)) {
        if (pixels_.empty()) throw Error("image frame must be non-empty");
        for (double v : pixels_.values()) {
            if (!(v >= 0.0 && v <= 1.0)) throw Error("image intensity outside [0,1]");
        }
    }
    /// Clamps every value into [0,1]; NaN becomes 0.
    static ImageFrame clamped(Grid<double> pixels) {
        for (double& v : pixels.values()) v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        return ImageFrame(std::move(pixels));
    }

    int width() const noexcept { return pixels_.width(); }
    int height() const noexcept { return pixels_.height(); }
    double operator()(int x, int y) const { return pixels_(x, y); }
    const Grid<double>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const ImageFrame&, const ImageFrame&) = default;

private:
    Grid<double> pixels_;
};

/// Mirror index into [0, n) (reflect-101 is not used: edge pixels repeat once).
inline int reflect_index(int i, int n) noexcept {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

/// Bilinear sample with coordinates clamped to the grid.
template <typename T>
double sample_bilinear(const Grid<T>& g, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(g.width() - 1));
    y = std::clamp(y, 0.0, static_cast<double>(g.height() - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, g.width() - 1);
    const int y1 = std::min(y0 + 1, g.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = (1.0 - fx) * static_cast<double>(g(x0, y0)) + fx * static_cast<double>(g(x1, y0));
    const double bottom = (1.0 - fx) * static_cast<double>(g(x0, y1)) + fx * static_cast<double>(g(x1, y1));
    return (1.0 - fy) * top + fy * bottom;
}

inline std::size_t count_set(const BinaryMask& m) {
    return static_cast<std::size_t>(std::count_if(m.values().begin(), m.values().end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

}  // namespace vtrack
