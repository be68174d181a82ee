#pragma once

#include <vector>

#include "vtrack/image.hpp"

namespace vtrack::filters {

/// Sampled Gaussian kernel (order 0), first derivative (1) or second derivative (2).
/// Radius is ceil(3 * sigma), at least 1. Order 0 sums to 1, orders 1 and 2 to 0.
std::vector<double> gaussian_kernel(double sigma, int order);

/// Separable correlation with mirrored borders.
Grid<double> convolve_separable(const Grid<double>& in, const std::vector<double>& kx,
                                const std::vector<double>& ky);

Grid<double> gaussian_blur(const Grid<double>& in, double sigma);

/// Downsample by 2 after a small blur.
Grid<double> pyramid_down(const Grid<double>& in);

/// Otsu threshold of values in [0,1] using 256 bins.
double otsu_threshold(const std::vector<double>& values);

}  // namespace vtrack::filters
