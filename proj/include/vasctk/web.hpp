#pragma once
// Parametric Woven-Endo-Bridge device geometry: thread pairs spun over a
// rotationally symmetric body with closed poles, plus pole markers.

#include <vector>

#include "vasctk/polyline.hpp"
#include "vasctk/trimesh.hpp"

namespace vasc {

struct WebDesign {
    double thread_radius = 0.02;   // r_t, mm
    double max_radius = 1.0;       // r_dmax, mm
    double height = 2.0;           // h_dmax, mm
    int windings = 1;              // n_w >= 1
    int thread_pairs = 20;         // n_t >= 1
    int boxiness = 5;              // b, positive integer
    double tip_length = 0.0;       // l in [0, 1/2]
    double tip_width = 0.1;        // w in [0, 1/2]
    bool markers = true;

    void validate() const;
};

// Symmetric bridge mollifier: 0 at the ends, 1 on (w, 1-w), smooth flanks.
double web_mollifier(double theta, double w);

struct WebShape {
    double r;  // normalized radius in [0, 1]
    double z;  // normalized height
};

// Normalized radius/height design functions evaluated at theta in [0, 1].
WebShape web_shape_functions(double theta, const WebDesign& design);

// 2*n_t thread center curves; pair i uses phase 2*pi*(i-1)/n_t, clockwise
// thread first. All threads meet on the axis at both poles.
std::vector<Polyline> gen_web_threads(const WebDesign& design, int samples_per_thread);

// Pole marker capsules (radius 2 r_t, segment length 4 r_t) pointing outward
// along the device axis; returned as segment paths for inflation/voxelization.
std::vector<Polyline> web_marker_paths(const WebDesign& design);

}  // namespace vasc
