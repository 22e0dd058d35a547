#pragma once
// AABB trees over triangles and segments: closest-point, ray, and
// inside/outside queries used by contact handling, voxelization and
// device placement.

#include <cstdint>
#include <vector>

#include "vasctk/trimesh.hpp"

namespace vasc {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b, double* t_out = nullptr);

struct ClosestHit {
    double dist = 1e300;       // unsigned distance, mm
    Vec3 point{};              // closest point on the surface
    int prim = -1;             // triangle / segment index
};

struct RayHit {
    double t = 1e300;          // ray parameter of the first hit
    int prim = -1;
};

class TriBvh {
public:
    TriBvh() = default;
    explicit TriBvh(const TriMesh& mesh);

    const TriMesh& mesh() const { return *mesh_; }
    bool empty() const { return nodes_.empty(); }

    // Nearest surface point; `upper_bound` prunes the search (pass a cached
    // distance from a previous query to make coherent queries cheap).
    ClosestHit closest(const Vec3& p, double upper_bound = 1e300) const;

    // First intersection along the ray, if any.
    bool first_hit(const Vec3& origin, const Vec3& dir, RayHit& hit) const;

    // Parity inside test for closed meshes (ray cast with jittered retry on
    // grazing hits). Deterministic for fixed inputs.
    bool inside(const Vec3& p) const;

    // All ray-crossing parameters t > 0 along `dir`; returns false if a
    // degenerate (edge/vertex-grazing) hit was encountered.
    bool all_crossings(const Vec3& origin, const Vec3& dir, std::vector<double>& ts) const;

private:
    struct Node {
        Aabb box;
        std::int32_t left = -1;    // internal: child index; leaf: first prim
        std::int32_t count = 0;    // leaf primitive count (0 for internal)
        std::int32_t right = -1;
    };
    const TriMesh* mesh_ = nullptr;
    std::vector<Node> nodes_;
    std::vector<std::int32_t> prims_;

    std::int32_t build(std::vector<std::int32_t>& ids, int lo, int hi,
                       std::vector<Aabb>& boxes, std::vector<Vec3>& centers);
};

// Same tree over line segments (wire devices).
class SegBvh {
public:
    SegBvh() = default;
    SegBvh(std::vector<Vec3> a, std::vector<Vec3> b);

    std::size_t size() const { return a_.size(); }
    ClosestHit closest(const Vec3& p, double upper_bound = 1e300) const;
    bool any_within(const Vec3& p, double r) const;

private:
    struct Node {
        Aabb box;
        std::int32_t left = -1;
        std::int32_t count = 0;
        std::int32_t right = -1;
    };
    std::vector<Vec3> a_, b_;
    std::vector<Node> nodes_;
    std::vector<std::int32_t> prims_;

    std::int32_t build(std::vector<std::int32_t>& ids, int lo, int hi,
                       std::vector<Aabb>& boxes, std::vector<Vec3>& centers);
};

}  // namespace vasc
