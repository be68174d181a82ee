#include "vtrack/config.hpp"

#include "vtrack/error.hpp"

namespace vtrack {

void TrackerConfig::validate() const {
    if (!(sigma >= 1.0)) throw Error("sigma must be >= 1");
    if (n_nearest < 1) throw Error("n must be >= 1");
    if (!(rho >= 0.0)) throw Error("rho must be >= 0");
    if (max_paths < 1) throw Error("max_paths must be >= 1");
    if (!(max_gap >= 1.0)) throw Error("max_gap must be >= 1");
    if (scales.empty()) throw Error("scales must be non-empty");
    for (double s : scales)
        if (!(s >= 0.5)) throw Error("every scale must be >= 0.5");
    if (threshold && !(*threshold >= 0.0 && *threshold <= 1.0)) throw Error("threshold must lie in [0,1]");
    if (!(snap_radius >= 0.0)) throw Error("snap_radius must be >= 0");
    if (!(resample_spacing > 0.0)) throw Error("resample_spacing must be > 0");
    if (!(max_match_cost > 0.0)) throw Error("max_match_cost must be > 0");
    if (daisy.rings < 1 || daisy.directions < 1 || daisy.bins < 1 || !(daisy.radius > 0.0))
        throw Error("daisy parameters must be positive");
    if (registration.levels < 1 || registration.block_size < 4 || registration.search_radius < 1)
        throw Error("registration parameters out of range");
    if (!(connection.accept_probability > 0.0 && connection.accept_probability <= 1.0))
        throw Error("accept_probability must lie in (0,1]");
}

}  // namespace vtrack
