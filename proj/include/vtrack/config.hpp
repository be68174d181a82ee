#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace vtrack {

/// Block-matching registration settings.
struct RegistrationParams {
    int levels = 3;
    int block_size = 16;
    int search_radius = 8;       // per level, in that level's pixels
    double smoothing_std = 4.0;  // in grid nodes
    double max_displacement = 32.0;
    double min_ncc = 0.5;        // block matches below this are treated as unreliable
};

/// DAISY layout: center + rings x directions sample points, `bins` orientations.
struct DaisyParams {
    double radius = 15.0;
    int rings = 3;
    int directions = 8;
    int bins = 8;

    int dimension() const noexcept { return (rings * directions + 1) * bins; }
};

/// Weights of the connection-probability fusion used by gap repair.
struct ConnectionParams {
    double w_skeleton = 0.4;
    double w_response = 0.4;
    double w_orientation = 0.2;
    double skeleton_blur_std = 2.0;
    double orientation_radius = 10.0;
    /// Bridges whose mean per-pixel cost exceeds -log(accept_probability) are rejected.
    double accept_probability = 0.2;

    double acceptance_ceiling() const { return -std::log(accept_probability); }
};

/// Everything the tracker needs besides the images.
struct TrackerConfig {
    double sigma = 5.0;   // tracking-range radius (px)
    int n_nearest = 2;    // nearest segments per guided endpoint
    double rho = 3.0;     // evaluation tolerance (px)
    std::vector<double> scales{1.0, 2.0, 3.0, 4.0};
    std::optional<double> threshold;  // ridge threshold; unset = Otsu in range
    double min_threshold = 0.05;
    double max_gap = 10.0;
    int max_paths = 512;
    double snap_radius = 3.0;
    double resample_spacing = 1.0;
    /// Selections whose warping distance per path step exceeds this fall back.
    double max_match_cost = 1.0;
    bool fusion = true;
    RegistrationParams registration;
    DaisyParams daisy;
    ConnectionParams connection;

    /// Throws vtrack::Error naming the offending field.
    void validate() const;
};

}  // namespace vtrack
