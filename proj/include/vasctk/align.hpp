#pragma once
// Rigid alignment of a vessel mesh: the inlet's area-weighted centroid moves
// to the origin and its outward normal onto the negative x-axis, so a
// prescribed inflow profile in +x enters orthogonally.

#include <utility>

#include "vasctk/rotation.hpp"
#include "vasctk/trimesh.hpp"

namespace vasc {

struct InletFrame {
    Vec3 center{};   // area-weighted centroid of the inlet triangles, mm
    Vec3 normal{};   // area-weighted outward unit normal
    double area = 0.0;
    double radius = 0.0;  // sqrt(area / pi), the equivalent circular radius
};

InletFrame inlet_frame(const TriMesh& mesh, int inlet_patch);

std::pair<TriMesh, RigidTransform> align_inlet(const TriMesh& mesh, int inlet_patch);

}  // namespace vasc
