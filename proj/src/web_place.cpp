#include "vasctk/web_place.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vasctk/rotation.hpp"

namespace vasc {

WebPlacement place_web(const std::vector<Polyline>& device_threads, const TriMesh& aneurysm,
                       const PlacementAxis& axis, double depth, double thread_radius,
                       int grid_alpha, int grid_z) {
    if (device_threads.empty()) throw std::invalid_argument("place_web: no threads");
    if (grid_alpha < 4 || grid_z < 2) throw std::invalid_argument("place_web: grid too coarse");
    if (!is_closed(aneurysm)) throw std::invalid_argument("place_web: aneurysm mesh must be closed");

    const Vec3 dir = normalized(axis.direction);
    const Mat3 R = rotation_between(Vec3{0, 0, 1}, dir);
    const Vec3 basis_a = R * Vec3{1, 0, 0};
    const Vec3 basis_b = R * Vec3{0, 1, 0};
    const Vec3 shift = axis.origin + dir * depth;

    // World-frame device samples and their cylindrical coordinates.
    WebPlacement result;
    result.threads = device_threads;
    double z_min = 1e300, z_max = -1e300, rho_global = 0.0;
    for (Polyline& thread : result.threads) {
        for (Vec3& p : thread.points) {
            p = R * p + shift;
            const double z = dot(p - axis.origin, dir);
            const Vec3 radial = p - axis.origin - dir * z;
            z_min = std::min(z_min, z);
            z_max = std::max(z_max, z);
            rho_global = std::max(rho_global, norm(radial));
        }
    }
    if (rho_global <= 0.0) throw std::invalid_argument("place_web: degenerate device");
    const double z_span = std::max(z_max - z_min, 1e-9);

    const TriBvh bvh(aneurysm);
    if (!bvh.inside(axis.origin + dir * (z_min + 0.5 * z_span)))
        throw std::invalid_argument("place_web: insertion axis misses the cavity");

    // Wall distance from the axis, sampled over (alpha, z). Axis stations
    // outside the cavity mark the device as taller than the cavity and get a
    // neutral distance so no expansion is requested there.
    std::vector<double> wall(static_cast<std::size_t>(grid_alpha) * grid_z);
    for (int jz = 0; jz < grid_z; ++jz) {
        const double z = z_min + z_span * jz / (grid_z - 1);
        const Vec3 station = axis.origin + dir * z;
        const bool station_inside = bvh.inside(station);
        if (!station_inside) result.taller_than_cavity = true;
        for (int ja = 0; ja < grid_alpha; ++ja) {
            const double alpha = 2.0 * M_PI * ja / grid_alpha;
            double d = rho_global + thread_radius;  // neutral: e_req = 1
            if (station_inside) {
                RayHit hit;
                const Vec3 rdir = basis_a * std::cos(alpha) + basis_b * std::sin(alpha);
                if (bvh.first_hit(station, rdir, hit)) d = hit.t;
            }
            wall[static_cast<std::size_t>(jz) * grid_alpha + ja] = d;
        }
    }

    auto wall_at = [&](double alpha, double z) {
        double fa = alpha / (2.0 * M_PI) * grid_alpha;
        fa -= std::floor(fa / grid_alpha) * grid_alpha;
        const int ia = static_cast<int>(std::floor(fa)) % grid_alpha;
        const double wa = fa - std::floor(fa);
        double fz = (z - z_min) / z_span * (grid_z - 1);
        fz = std::clamp(fz, 0.0, static_cast<double>(grid_z - 1));
        const int iz = std::min(static_cast<int>(fz), grid_z - 2);
        const double wz = fz - iz;
        auto w = [&](int jz, int ja) {
            return wall[static_cast<std::size_t>(jz) * grid_alpha + (ja % grid_alpha)];
        };
        return (1.0 - wz) * ((1.0 - wa) * w(iz, ia) + wa * w(iz, ia + 1)) +
               wz * ((1.0 - wa) * w(iz + 1, ia) + wa * w(iz + 1, ia + 1));
    };

    for (Polyline& thread : result.threads) {
        for (Vec3& p : thread.points) {
            const double z = dot(p - axis.origin, dir);
            const Vec3 radial = p - axis.origin - dir * z;
            const double rho = norm(radial);
            if (rho < 1e-12) continue;  // pole points stay on the axis
            const double alpha = std::atan2(dot(radial, basis_b), dot(radial, basis_a));
            const double d = wall_at(alpha < 0.0 ? alpha + 2.0 * M_PI : alpha, z);
            const double e = std::max(1.0, (d - thread_radius) / rho_global);
            result.max_expansion = std::max(result.max_expansion, e);
            double rho_new = std::max(rho, std::min(rho * e, d - thread_radius));
            Vec3 q = axis.origin + dir * z + radial * (rho_new / rho);
            // Concave walls can defeat the bilinear clamp; pull back inside.
            for (int it = 0; it < 24 && !bvh.inside(q); ++it) {
                rho_new = rho + 0.5 * (rho_new - rho);
                q = axis.origin + dir * z + radial * (rho_new / rho);
            }
            p = q;
        }
        thread.recompute_arc();
    }
    return result;
}

}  // namespace vasc
