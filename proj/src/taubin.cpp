#include "vasctk/taubin.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace vasc {

namespace {

// Vertex 1-ring adjacency from the triangle soup; throws if some edge has
// more than two incident triangles (non-manifold neighborhood).
std::vector<std::vector<int>> vertex_rings(const TriMesh& mesh) {
    std::unordered_map<std::uint64_t, int> edge_count;
    edge_count.reserve(mesh.triangles.size() * 3);
    std::vector<std::vector<int>> ring(mesh.vertices.size());
    auto add = [&](int a, int b) {
        int lo = std::min(a, b), hi = std::max(a, b);
        std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
        int& c = edge_count[key];
        if (++c > 2) throw std::invalid_argument("taubin_smooth_surface: non-manifold edge");
        if (c == 1) {
            ring[a].push_back(b);
            ring[b].push_back(a);
        }
    };
    for (const auto& tri : mesh.triangles) {
        add(tri[0], tri[1]);
        add(tri[1], tri[2]);
        add(tri[2], tri[0]);
    }
    return ring;
}

void umbrella_pass(std::vector<Vec3>& pos, const std::vector<std::vector<int>>& ring,
                   double weight, std::vector<Vec3>& delta) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (ring[i].empty()) {
            delta[i] = Vec3{};
            continue;
        }
        Vec3 avg{};
        for (int j : ring[i]) avg += pos[j];
        delta[i] = avg / static_cast<double>(ring[i].size()) - pos[i];
    }
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] += delta[i] * weight;
}

}  // namespace

TriMesh taubin_smooth_surface(const TriMesh& mesh, const TaubinParams& params) {
    TriMesh out = mesh;
    if (params.iterations <= 0 || mesh.vertices.empty()) return out;

    const auto ring = vertex_rings(mesh);
    std::vector<Vec3> delta(mesh.vertices.size());
    for (int it = 0; it < params.iterations; ++it) {
        umbrella_pass(out.vertices, ring, params.lambda, delta);
        umbrella_pass(out.vertices, ring, params.mu, delta);
    }
    out.update_cache();
    return out;
}

}  // namespace vasc
