#pragma once

#include <string>

#include "vtrack/config.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/image.hpp"

namespace vtrack::preprocess {

/// Dense displacement mapping a key-frame location to its current-frame location.
struct DeformationField {
    Grid<double> dx;
    Grid<double> dy;

    DeformationField() = default;
    DeformationField(int width, int height) : dx(width, height, 0.0), dy(width, height, 0.0) {}

    int width() const noexcept { return dx.width(); }
    int height() const noexcept { return dx.height(); }

    /// Bilinear displacement at a sub-pixel location.
    Point displacement(Point p) const {
        return {sample_bilinear(dx, p.x, p.y), sample_bilinear(dy, p.x, p.y)};
    }
    double max_abs() const;
};

struct RegistrationResult {
    DeformationField field;
    /// Set when the block matches failed to reduce the intensity MSE; the field is identity.
    bool warning = false;
    double mse_identity = 0.0;
    double mse_registered = 0.0;
};

/// Coarse-to-fine block matching (NCC score), confidence-weighted smoothing of the
/// sparse displacement grid and bilinear upsampling to a dense field.
RegistrationResult register_frames(const ImageFrame& key, const ImageFrame& cur,
                                   const RegistrationParams& params = {});

/// key warped into the current frame: out(q) = key(q - d(q)).
Grid<double> warp_to_current(const ImageFrame& key, const DeformationField& field);

double mean_squared_difference(const Grid<double>& a, const Grid<double>& b);

/// Displaces every point by the interpolated field, clamped to the frame.
VesselAnnotation map_annotation(const VesselAnnotation& ann, const DeformationField& field);
Polyline map_polyline(const Polyline& p, const DeformationField& field);

/// Pixels within Euclidean distance `sigma` of the rasterized branch.
BinaryMask tracking_range(const Polyline& branch, double sigma, int width, int height);

/// Field file: a `DFIELD <width> <height>` text line, then little-endian float32
/// dx (row-major) followed by dy (row-major).
void write_field(const std::string& path, const DeformationField& field);
DeformationField read_field(const std::string& path);

}  // namespace vtrack::preprocess
