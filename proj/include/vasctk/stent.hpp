#pragma once
// Stent / flow-diverter geometry: helical thread pairs in a normalized
// straight reference shape, mapped onto a framed centerline.

#include <vector>

#include "vasctk/polyline.hpp"

namespace vasc {

enum class StentRadiusMode {
    constant_min_gauge,  // r_d = min over [0, h_dmax] of the vessel radius
    local_gauge,         // r_d follows the local vessel radius
};

struct StentDesign {
    double thread_radius = 0.05;  // r_t, mm
    double arc_length = 10.0;     // h_dmax, mm
    int windings = 6;             // n_w >= 1
    int thread_pairs = 4;         // n_t >= 1
    StentRadiusMode radius_mode = StentRadiusMode::constant_min_gauge;

    void validate() const;
};

// Normalized straight reference threads: unit radius around the z-axis,
// z = h_dmax * theta.
std::vector<Polyline> stent_reference_threads(const StentDesign& design, int samples_per_thread);

// Threads bent along the centerline via its parallel-transported frame and
// scaled by the vessel gauge. `line` must carry frames and radii and span
// arc length h_dmax (within 1e-6 mm).
std::vector<Polyline> gen_stent_threads(const StentDesign& design, const Polyline& line,
                                        int samples_per_thread);

}  // namespace vasc
