#include "vasctk/align.hpp"

#include <cmath>
#include <stdexcept>

namespace vasc {

InletFrame inlet_frame(const TriMesh& mesh, int inlet_patch) {
    if (mesh.patch.size() != mesh.triangles.size())
        throw std::invalid_argument("inlet_frame: mesh has no patch labels");

    InletFrame f;
    Vec3 centroid_sum{};
    Vec3 normal_sum{};
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (mesh.patch[t] != inlet_patch) continue;
        const Vec3 v1 = mesh.tri_vertex(static_cast<int>(t), 0);
        const Vec3 v2 = mesh.tri_vertex(static_cast<int>(t), 1);
        const Vec3 v3 = mesh.tri_vertex(static_cast<int>(t), 2);
        const Vec3 c = cross(v2 - v1, v3 - v1);
        const double a = 0.5 * norm(c);
        f.area += a;
        centroid_sum += (v1 + v2 + v3) * (a / 3.0);
        normal_sum += c * 0.5;  // area-weighted normal
    }
    if (f.area <= kDegenerateArea)
        throw std::invalid_argument("inlet_frame: inlet patch empty or degenerate");
    f.center = centroid_sum / f.area;
    const double nlen = norm(normal_sum);
    if (nlen <= 1e-12)
        throw std::invalid_argument("inlet_frame: inlet normal ill-defined");
    f.normal = normal_sum / nlen;
    f.radius = std::sqrt(f.area / M_PI);
    return f;
}

std::pair<TriMesh, RigidTransform> align_inlet(const TriMesh& mesh, int inlet_patch) {
    const InletFrame f = inlet_frame(mesh, inlet_patch);

    RigidTransform xf;
    xf.rotation = rotation_between(f.normal, Vec3{-1.0, 0.0, 0.0});
    xf.translation = -(xf.rotation * f.center);

    TriMesh out = mesh;
    for (Vec3& v : out.vertices) v = xf.apply(v);
    out.update_cache();
    return {std::move(out), xf};
}

}  // namespace vasc
