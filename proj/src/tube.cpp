#include "vasctk/tube.hpp"

#include <cmath>
#include <stdexcept>

#include "vasctk/rotation.hpp"

namespace vasc {

namespace {

constexpr double kClosedEps = 1e-9;

void add_ring_band(TriMesh& mesh, int ring_a, int ring_b, int sides, int offset_b = 0) {
    auto idx = [&](int base, int k) { return base + ((k % sides) + sides) % sides; };
    for (int k = 0; k < sides; ++k) {
        const int a0 = idx(ring_a, k), a1 = idx(ring_a, k + 1);
        const int b0 = idx(ring_b, k + offset_b), b1 = idx(ring_b, k + 1 + offset_b);
        mesh.triangles.push_back({a0, a1, b0});
        mesh.triangles.push_back({a1, b1, b0});
    }
}

// Hemispherical cap over the end ring. `outward` is the axis direction the
// cap bulges toward; winding of the generated triangles keeps outward
// orientation when the tube rings wind counter-clockwise around +t.
void add_cap(TriMesh& mesh, int end_ring, const Vec3& center, const Vec3& outward, const Vec3& u,
             const Vec3& v, double radius, int sides, bool flip) {
    const int n_lat = std::max(2, sides / 4);
    int prev_ring = end_ring;
    for (int j = 1; j < n_lat; ++j) {
        const double psi = 0.5 * M_PI * j / n_lat;
        const int ring = static_cast<int>(mesh.vertices.size());
        for (int k = 0; k < sides; ++k) {
            const double phi = 2.0 * M_PI * k / sides;
            const Vec3 radial = u * std::cos(phi) + v * std::sin(phi);
            mesh.vertices.push_back(center + radial * (radius * std::cos(psi)) +
                                    outward * (radius * std::sin(psi)));
        }
        if (flip)
            add_ring_band(mesh, ring, prev_ring, sides);
        else
            add_ring_band(mesh, prev_ring, ring, sides);
        prev_ring = ring;
    }
    const int apex = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(center + outward * radius);
    for (int k = 0; k < sides; ++k) {
        const int a = prev_ring + k, b = prev_ring + (k + 1) % sides;
        if (flip)
            mesh.triangles.push_back({b, a, apex});
        else
            mesh.triangles.push_back({a, b, apex});
    }
}

}  // namespace

TriMesh inflate_tube(const Polyline& path, double tube_radius, int sides) {
    if (tube_radius <= 0.0) throw std::invalid_argument("inflate_tube: radius must be positive");
    if (sides < 6) throw std::invalid_argument("inflate_tube: need at least 6 sides");
    if (path.size() < 2) throw std::invalid_argument("inflate_tube: need at least 2 points");
    for (std::size_t i = 1; i < path.size(); ++i)
        if (norm(path.points[i] - path.points[i - 1]) < kClosedEps)
            throw std::invalid_argument("inflate_tube: consecutive duplicate points");

    const bool closed =
        path.size() > 3 && norm(path.points.front() - path.points.back()) < kClosedEps;

    Polyline curve = path;
    if (closed) {
        curve.points.pop_back();  // drop the duplicate end point
        if (curve.has_radii()) curve.radii.pop_back();
        curve.recompute_arc();
    }
    const Polyline framed = parallel_transport_frames(curve);
    const std::size_t n = framed.size();

    TriMesh mesh;
    mesh.vertices.reserve(n * sides + 2 * sides * (sides / 4));
    for (std::size_t i = 0; i < n; ++i) {
        const Frame& f = framed.frames[i];
        for (int k = 0; k < sides; ++k) {
            const double phi = 2.0 * M_PI * k / sides;
            mesh.vertices.push_back(framed.points[i] +
                                    (f.u * std::cos(phi) + f.v * std::sin(phi)) * tube_radius);
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        add_ring_band(mesh, static_cast<int>(i) * sides, static_cast<int>(i + 1) * sides, sides);

    if (closed) {
        // Stitch last ring to first; the seam offset compensates the frame
        // holonomy picked up around the loop.
        const Frame& f0 = framed.frames.front();
        const Frame& fn = framed.frames.back();
        const Mat3 R = rotation_between(fn.t, f0.t);
        const Vec3 u_back = R * fn.u;
        const double ang = std::atan2(dot(cross(f0.u, u_back), f0.t), dot(f0.u, u_back));
        const int offset = static_cast<int>(std::lround(ang / (2.0 * M_PI / sides)));
        add_ring_band(mesh, static_cast<int>(n - 1) * sides, 0, sides, offset);
    } else {
        const Frame& f0 = framed.frames.front();
        const Frame& fn = framed.frames.back();
        add_cap(mesh, 0, framed.points.front(), -f0.t, f0.u, f0.v, tube_radius, sides,
                /*flip=*/true);
        add_cap(mesh, static_cast<int>(n - 1) * sides, framed.points.back(), fn.t, fn.u, fn.v,
                tube_radius, sides, /*flip=*/false);
    }
    mesh.update_cache();
    return mesh;
}

}  // namespace vasc
