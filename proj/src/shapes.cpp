#include "vasctk/shapes.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace vasc {

TriMesh make_icosphere(double radius, int level, const Vec3& center) {
    if (radius <= 0.0) throw std::invalid_argument("make_icosphere: radius must be positive");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh mesh;
    mesh.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                     {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                     {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            int idx = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& tri : mesh.triangles) {
            int a = mid(tri[0], tri[1]), b = mid(tri[1], tri[2]), c = mid(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        mesh.triangles = std::move(next);
    }

    for (Vec3& v : mesh.vertices) v = normalized(v) * radius + center;
    mesh.update_cache();
    return mesh;
}

TriMesh make_box(const Vec3& lo, const Vec3& hi) {
    TriMesh mesh;
    mesh.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z},
                     {lo.x, hi.y, lo.z}, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z},
                     {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
    mesh.triangles = {{0, 2, 1}, {0, 3, 2},   // z = lo
                      {4, 5, 6}, {4, 6, 7},   // z = hi
                      {0, 1, 5}, {0, 5, 4},   // y = lo
                      {3, 6, 2}, {3, 7, 6},   // y = hi
                      {0, 4, 7}, {0, 7, 3},   // x = lo
                      {1, 2, 6}, {1, 6, 5}};  // x = hi
    mesh.update_cache();
    return mesh;
}

TriMesh make_capped_cylinder(const Vec3& p0, const Vec3& p1, double radius, int n_circ,
                             int n_axial) {
    if (radius <= 0.0 || n_circ < 3 || n_axial < 1)
        throw std::invalid_argument("make_capped_cylinder: bad parameters");

    const Vec3 axis = p1 - p0;
    const double len = norm(axis);
    if (len <= 0.0) throw std::invalid_argument("make_capped_cylinder: zero length");
    const Vec3 t = axis / len;
    Vec3 ref = std::abs(t.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 u = normalized(ref - t * dot(ref, t));
    const Vec3 v = cross(t, u);

    TriMesh mesh;
    const int wall = mesh.add_patch("wall");
    const int inlet = mesh.add_patch("inlet");
    const int outlet = mesh.add_patch("outlet0");

    for (int a = 0; a <= n_axial; ++a) {
        const Vec3 c = p0 + t * (len * a / n_axial);
        for (int k = 0; k < n_circ; ++k) {
            double phi = 2.0 * M_PI * k / n_circ;
            mesh.vertices.push_back(c + (u * std::cos(phi) + v * std::sin(phi)) * radius);
        }
    }
    auto ring = [&](int a, int k) { return a * n_circ + (k % n_circ); };
    for (int a = 0; a < n_axial; ++a)
        for (int k = 0; k < n_circ; ++k) {
            mesh.triangles.push_back({ring(a, k), ring(a, k + 1), ring(a + 1, k)});
            mesh.patch.push_back(wall);
            mesh.triangles.push_back({ring(a, k + 1), ring(a + 1, k + 1), ring(a + 1, k)});
            mesh.patch.push_back(wall);
        }

    const int c0 = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(p0);
    const int c1 = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(p1);
    for (int k = 0; k < n_circ; ++k) {
        mesh.triangles.push_back({c0, ring(0, k + 1), ring(0, k)});  // cap normal along -t
        mesh.patch.push_back(inlet);
        mesh.triangles.push_back({c1, ring(n_axial, k), ring(n_axial, k + 1)});
        mesh.patch.push_back(outlet);
    }
    mesh.update_cache();
    return mesh;
}

void append_mesh(TriMesh& a, const TriMesh& b) {
    const int vbase = static_cast<int>(a.vertices.size());
    a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
    std::vector<int> patch_remap(b.patch_names.size());
    for (std::size_t i = 0; i < b.patch_names.size(); ++i)
        patch_remap[i] = a.add_patch(b.patch_names[i]);
    a.patch.resize(a.triangles.size(), -1);
    for (std::size_t t = 0; t < b.triangles.size(); ++t) {
        a.triangles.push_back({b.triangles[t][0] + vbase, b.triangles[t][1] + vbase,
                               b.triangles[t][2] + vbase});
        int p = (t < b.patch.size()) ? b.patch[t] : -1;
        a.patch.push_back(p >= 0 ? patch_remap[p] : -1);
    }
    a.update_cache();
}

void transform_mesh(TriMesh& mesh, const Mat3& linear, const Vec3& shift) {
    for (Vec3& v : mesh.vertices) v = linear * v + shift;
    mesh.update_cache();
}

}  // namespace vasc
