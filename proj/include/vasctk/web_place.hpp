#pragma once
// Geometric placement of a WEB device into an aneurysm cavity: translate
// along an insertion axis, then expand radially until the device touches the
// wall, with the expansion factor varying over angle and axial height.

#include <vector>

#include "vasctk/bvh.hpp"
#include "vasctk/polyline.hpp"
#include "vasctk/trimesh.hpp"

namespace vasc {

struct PlacementAxis {
    Vec3 origin{};       // point on the axis, mm
    Vec3 direction{0, 0, 1};  // unit insertion direction (device +z maps here)
};

struct WebPlacement {
    std::vector<Polyline> threads;   // deformed thread curves, world frame
    bool taller_than_cavity = false; // device z-range exceeded the cavity along the axis
    double max_expansion = 1.0;      // max of the applied factor e(alpha, z)
};

// `device_threads` are thread curves in the device frame (axis along +z).
// `depth` slides the device along the axis before expansion. The expansion
// factor e(alpha, z) >= 1 is sampled on a grid and bilinearly interpolated;
// scaled points are clamped so nothing exits the closed mesh.
WebPlacement place_web(const std::vector<Polyline>& device_threads, const TriMesh& aneurysm,
                       const PlacementAxis& axis, double depth, double thread_radius,
                       int grid_alpha = 64, int grid_z = 64);

}  // namespace vasc
