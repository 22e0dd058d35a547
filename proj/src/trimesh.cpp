#include "vasctk/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace vasc {

int TriMesh::patch_id(const std::string& name) const {
    for (std::size_t i = 0; i < patch_names.size(); ++i)
        if (patch_names[i] == name) return static_cast<int>(i);
    return -1;
}

int TriMesh::add_patch(const std::string& name) {
    int id = patch_id(name);
    if (id >= 0) return id;
    patch_names.push_back(name);
    return static_cast<int>(patch_names.size()) - 1;
}

std::vector<int> TriMesh::patch_triangles(int id) const {
    std::vector<int> out;
    for (std::size_t t = 0; t < patch.size(); ++t)
        if (patch[t] == id) out.push_back(static_cast<int>(t));
    return out;
}

void TriMesh::update_cache() {
    tri_normal.assign(triangles.size(), Vec3{});
    tri_area.assign(triangles.size(), 0.0);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const Vec3 v1 = vertices[triangles[t][0]];
        const Vec3 v2 = vertices[triangles[t][1]];
        const Vec3 v3 = vertices[triangles[t][2]];
        const Vec3 c = cross(v2 - v1, v3 - v1);
        const double a = 0.5 * norm(c);
        tri_area[t] = a;
        if (a >= kDegenerateArea) tri_normal[t] = c / (2.0 * a);
    }
}

void TriMesh::validate_indices() const {
    const int n = static_cast<int>(vertices.size());
    for (const auto& tri : triangles) {
        for (int k = 0; k < 3; ++k)
            if (tri[k] < 0 || tri[k] >= n)
                throw std::invalid_argument("TriMesh: triangle index out of range");
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw std::invalid_argument("TriMesh: degenerate index triple");
    }
}

Aabb TriMesh::bounds() const {
    Aabb box;
    for (const Vec3& v : vertices) box.expand(v);
    return box;
}

void TriMesh::flip_orientation() {
    for (auto& tri : triangles) std::swap(tri[1], tri[2]);
    update_cache();
}

namespace {

// Directed edge map: key (a,b) with a,b vertex ids.
inline std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

bool is_closed(const TriMesh& mesh) {
    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(mesh.triangles.size() * 3);
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            if (++directed[edge_key(a, b)] > 1) return false;  // duplicate orientation
        }
    }
    // Closed iff every directed edge has its reverse present.
    for (const auto& [key, cnt] : directed) {
        (void)cnt;
        int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
        if (directed.find(edge_key(b, a)) == directed.end()) return false;
    }
    return true;
}

bool is_edge_manifold(const TriMesh& mesh) {
    std::unordered_map<std::uint64_t, int> undirected;
    undirected.reserve(mesh.triangles.size() * 3);
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            if (++undirected[edge_key(a, b)] > 2) return false;
        }
    }
    return true;
}

double signed_volume(const TriMesh& mesh) {
    double v = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec3 v1 = mesh.vertices[mesh.triangles[t][0]];
        const Vec3 v2 = mesh.vertices[mesh.triangles[t][1]];
        const Vec3 v3 = mesh.vertices[mesh.triangles[t][2]];
        // <v1, n_T> A_T written as a scalar triple product; degenerate
        // triangles contribute zero without needing the cached normal.
        v += dot(v1, cross(v2 - v1, v3 - v1)) * 0.5;
    }
    return v / 3.0;
}

SurfaceMeasure measure(const TriMesh& mesh, const std::vector<int>& cap_triangles) {
    if (!is_closed(mesh))
        throw std::invalid_argument("measure: mesh is not closed, volume undefined");

    std::vector<char> is_cap(mesh.triangles.size(), 0);
    for (int t : cap_triangles) {
        if (t < 0 || t >= static_cast<int>(mesh.triangles.size()))
            throw std::invalid_argument("measure: cap triangle id out of range");
        is_cap[t] = 1;
    }

    SurfaceMeasure r;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec3 v1 = mesh.vertices[mesh.triangles[t][0]];
        const Vec3 v2 = mesh.vertices[mesh.triangles[t][1]];
        const Vec3 v3 = mesh.vertices[mesh.triangles[t][2]];
        const Vec3 c = cross(v2 - v1, v3 - v1);
        const double area = 0.5 * norm(c);
        if (!is_cap[t]) r.surface_area += area;
        r.volume += dot(v1, c) * 0.5 / 3.0;
    }
    if (r.volume < 0.0)
        throw std::invalid_argument("measure: negative volume, inverted orientation");
    return r;
}

void weld_vertices(TriMesh& mesh, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("weld_vertices: eps must be positive");

    // Quantized hash grid; each vertex also checks the 27 neighbor cells so
    // pairs straddling a cell boundary still merge.
    struct CellHash {
        std::size_t operator()(const std::array<std::int64_t, 3>& c) const {
            std::uint64_t h = 1469598103934665603ull;
            for (std::int64_t v : c) {
                h ^= static_cast<std::uint64_t>(v);
                h *= 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };
    std::unordered_map<std::array<std::int64_t, 3>, std::vector<int>, CellHash> grid;
    std::vector<int> remap(mesh.vertices.size(), -1);
    std::vector<Vec3> out;
    out.reserve(mesh.vertices.size());

    const double inv = 1.0 / eps;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3 p = mesh.vertices[i];
        const std::array<std::int64_t, 3> cell = {
            static_cast<std::int64_t>(std::floor(p.x * inv)),
            static_cast<std::int64_t>(std::floor(p.y * inv)),
            static_cast<std::int64_t>(std::floor(p.z * inv))};
        int found = -1;
        for (std::int64_t dx = -1; dx <= 1 && found < 0; ++dx)
            for (std::int64_t dy = -1; dy <= 1 && found < 0; ++dy)
                for (std::int64_t dz = -1; dz <= 1 && found < 0; ++dz) {
                    auto it = grid.find({cell[0] + dx, cell[1] + dy, cell[2] + dz});
                    if (it == grid.end()) continue;
                    for (int j : it->second)
                        if (norm2(out[j] - p) <= eps * eps) { found = j; break; }
                }
        if (found < 0) {
            found = static_cast<int>(out.size());
            out.push_back(p);
            grid[cell].push_back(found);
        }
        remap[i] = found;
    }

    std::vector<std::array<int, 3>> tris;
    std::vector<int> patches;
    tris.reserve(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        std::array<int, 3> tri = {remap[mesh.triangles[t][0]], remap[mesh.triangles[t][1]],
                                  remap[mesh.triangles[t][2]]};
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;  // collapsed
        tris.push_back(tri);
        if (!mesh.patch.empty()) patches.push_back(mesh.patch[t]);
    }
    mesh.vertices = std::move(out);
    mesh.triangles = std::move(tris);
    mesh.patch = std::move(patches);
    mesh.update_cache();
}

bool repair_orientation(TriMesh& mesh) {
    if (!is_closed(mesh)) return false;
    if (signed_volume(mesh) >= 0.0) return false;
    std::cerr << "[vasctk] warning: mesh orientation inverted (V < 0), flipping all triangles\n";
    mesh.flip_orientation();
    return true;
}

}  // namespace vasc
