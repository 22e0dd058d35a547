#pragma once
// Indexed triangle surface with optional boundary-patch labels.
// Units: millimeters.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vasctk/vec3.hpp"

namespace vasc {

// Degenerate triangles below this area are kept in the index buffer but
// contribute zero area/volume and get a zero cached normal.
constexpr double kDegenerateArea = 1e-12;  // mm^2

struct TriMesh {
    std::vector<Vec3> vertices;                     // mm
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> patch;                         // per-triangle patch id, -1 = unlabeled
    std::vector<std::string> patch_names;           // id -> label ("wall", "inlet", "outlet0", "cap", ...)

    // Cached per-triangle data, rebuilt by update_cache().
    std::vector<Vec3> tri_normal;                   // unit outward normal, zero if degenerate
    std::vector<double> tri_area;                   // mm^2

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    Vec3 tri_vertex(int t, int k) const { return vertices[triangles[t][k]]; }
    Vec3 tri_centroid(int t) const {
        return (tri_vertex(t, 0) + tri_vertex(t, 1) + tri_vertex(t, 2)) / 3.0;
    }

    int patch_id(const std::string& name) const;        // -1 if absent
    int add_patch(const std::string& name);             // existing id if present
    std::vector<int> patch_triangles(int id) const;

    void update_cache();
    void validate_indices() const;                      // throws on bad/degenerate index triples
    Aabb bounds() const;

    void flip_orientation();
};

// Every edge shared by exactly two triangles with opposite orientation.
bool is_closed(const TriMesh& mesh);

// No edge with more than two incident triangles.
bool is_edge_manifold(const TriMesh& mesh);

// Signed volume via the divergence formula V = 1/3 sum <v1, n_T> A_T.
double signed_volume(const TriMesh& mesh);

struct SurfaceMeasure {
    double surface_area = 0.0;  // mm^2, cap triangles excluded
    double volume = 0.0;        // mm^3
};

// Surface of the sack (triangles outside `cap`) and enclosed volume
// (all triangles). Requires a closed mesh with outward orientation;
// throws on open meshes and on negative volume (inverted orientation).
SurfaceMeasure measure(const TriMesh& mesh, const std::vector<int>& cap_triangles = {});

// Merge vertices closer than eps (mm) so STL soup gains shared edges.
void weld_vertices(TriMesh& mesh, double eps = 1e-6);

// Flip all triangles once if the closed mesh has negative signed volume.
// Returns true if a flip was applied. No-op for open meshes.
bool repair_orientation(TriMesh& mesh);

}  // namespace vasc
