#pragma once
// Parametric test/benchmark geometry: icospheres, boxes, capped cylinders.

#include "vasctk/trimesh.hpp"

namespace vasc {

// Icosahedron subdivided `level` times, vertices projected to radius R.
TriMesh make_icosphere(double radius, int level, const Vec3& center = {});

// Axis-aligned box as 12 triangles, outward orientation.
TriMesh make_box(const Vec3& lo, const Vec3& hi);

// Cylinder from p0 to p1 with flat end caps. Patch labels: side "wall",
// cap at p0 "inlet", cap at p1 "outlet0".
TriMesh make_capped_cylinder(const Vec3& p0, const Vec3& p1, double radius,
                             int n_circ = 48, int n_axial = 8);

// Concatenate meshes (labels of `b` are remapped into `a`'s patch table).
void append_mesh(TriMesh& a, const TriMesh& b);

void transform_mesh(TriMesh& mesh, const Mat3& linear, const Vec3& shift);

}  // namespace vasc
