#include "vasctk/rod_contact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vasc {

void ContactParams::validate() const {
    if (k_cc < 0 || gamma_cc < 0 || k_cw < 0 || gamma_w < 0)
        throw std::invalid_argument("ContactParams: stiffness/dissipation must be >= 0");
    if (mu_w < 0.0 || mu_w > 1.0)
        throw std::invalid_argument("ContactParams: mu_w must lie in [0, 1]");
    if (coil_diameter <= 0.0)
        throw std::invalid_argument("ContactParams: coil diameter must be positive");
}

void WallDistanceCache::reset(std::size_t nodes) {
    lower_bound_.assign(nodes, 0.0);
    travel_.assign(nodes, 0.0);
}

WallDistanceCache::Sample WallDistanceCache::query(const TriBvh& wall, const Vec3& p,
                                                   std::size_t i, double range) {
    if (i < lower_bound_.size() && lower_bound_[i] - travel_[i] > range)
        return {lower_bound_[i] - travel_[i], Vec3{}, false};

    const ClosestHit hit = wall.closest(p);
    if (i < lower_bound_.size()) {
        lower_bound_[i] = hit.dist;
        travel_[i] = 0.0;
    }
    const Vec3 n_mesh = wall.mesh().tri_normal[hit.prim];  // outward of the enclosed volume
    const bool inside = dot(p - hit.point, n_mesh) < 0.0;
    Sample s;
    s.signed_dist = inside ? hit.dist : -hit.dist;
    s.normal = -n_mesh;  // into the cavity
    s.valid = true;
    return s;
}

int default_exclusion(const RodState& state, const ContactParams& params) {
    double mean_rest = 0.0;
    for (double l : state.nat.rest_len) mean_rest += l;
    mean_rest /= static_cast<double>(state.nat.rest_len.size());
    return std::max(1, static_cast<int>(std::ceil(1.5 * params.coil_diameter / mean_rest)));
}

namespace {

// Linked-cell grid over the inserted edges, binned by midpoint. Cell size
// 1.25 D2 so the 27-cell neighborhood covers node-edge distance D2 plus
// half an edge length.
struct EdgeGrid {
    Vec3 origin;
    double cell = 1.0;
    int nx = 0, ny = 0, nz = 0;
    std::vector<int> head;
    std::vector<int> next;

    void build(const RodState& s, int n_edges, double d2) {
        cell = 1.25 * d2;
        Aabb box;
        for (int j = 0; j < n_edges; ++j) {
            box.expand(s.x[j]);
            box.expand(s.x[j + 1]);
        }
        origin = box.lo - Vec3{cell, cell, cell};
        const Vec3 ext = box.hi + Vec3{cell, cell, cell} - origin;
        nx = std::max(1, static_cast<int>(ext.x / cell) + 1);
        ny = std::max(1, static_cast<int>(ext.y / cell) + 1);
        nz = std::max(1, static_cast<int>(ext.z / cell) + 1);
        head.assign(static_cast<std::size_t>(nx) * ny * nz, -1);
        next.assign(n_edges, -1);
        for (int j = 0; j < n_edges; ++j) {
            const Vec3 mid = (s.x[j] + s.x[j + 1]) * 0.5;
            const int c = cell_index(mid);
            next[j] = head[c];
            head[c] = j;
        }
    }

    int clamp_coord(double v, int n) const {
        return std::clamp(static_cast<int>(v), 0, n - 1);
    }
    int cell_index(const Vec3& p) const {
        const int ix = clamp_coord((p.x - origin.x) / cell, nx);
        const int iy = clamp_coord((p.y - origin.y) / cell, ny);
        const int iz = clamp_coord((p.z - origin.z) / cell, nz);
        return (iz * ny + iy) * nx + ix;
    }

    template <class Fn>
    void for_neighbors(const Vec3& p, Fn&& fn) const {
        const int ix = clamp_coord((p.x - origin.x) / cell, nx);
        const int iy = clamp_coord((p.y - origin.y) / cell, ny);
        const int iz = clamp_coord((p.z - origin.z) / cell, nz);
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int cx = ix + dx, cy = iy + dy, cz = iz + dz;
                    if (cx < 0 || cy < 0 || cz < 0 || cx >= nx || cy >= ny || cz >= nz) continue;
                    for (int j = head[(static_cast<std::size_t>(cz) * ny + cy) * nx + cx]; j >= 0;
                         j = next[j])
                        fn(j);
                }
    }
};

}  // namespace

std::vector<Vec3> contact_forces(const RodState& s, const TriBvh& wall,
                                 const ContactParams& params, const std::vector<Vec3>& internal,
                                 WallDistanceCache* cache, int exclusion) {
    params.validate();
    const int n_ins = s.inserted_count;
    const int n = static_cast<int>(s.size());
    std::vector<Vec3> ext(n, Vec3{});
    if (n_ins == 0) return ext;
    if (exclusion < 0) exclusion = default_exclusion(s, params);

    const double d2 = params.coil_diameter;

    // Coil-coil: node i against inserted edges j.
    std::vector<Vec3> cc(n, Vec3{});
    const int n_edges = std::min(n_ins - 1, n - 1);
    if (n_edges > 0 && (params.k_cc > 0.0 || params.gamma_cc > 0.0)) {
        static thread_local EdgeGrid grid;
        grid.build(s, n_edges, d2);
        for (int i = 0; i < n_ins; ++i) {
            const Vec3 xi = s.x[i];
            grid.for_neighbors(xi, [&](int j) {
                if (j >= i - exclusion && j <= i + exclusion - 1) return;  // same-strand window
                double t;
                const Vec3 q = closest_point_on_segment(xi, s.x[j], s.x[j + 1], &t);
                const Vec3 dvec = q - xi;  // from the node toward the edge
                const double dist = norm(dvec);
                const double overlap = d2 - dist;
                if (overlap <= 0.0 || dist < 1e-12) return;
                const Vec3 dhat = dvec / dist;
                const Vec3 v_edge = (s.v[j] + s.v[j + 1]) * 0.5;
                const double approach = dot(s.v[i] - v_edge, dhat);
                const Vec3 f = dhat * (-params.k_cc * overlap - params.gamma_cc * approach);
                cc[i] += f;
                if (params.edge_reaction) {
                    cc[j] -= f * (1.0 - t);
                    cc[j + 1] -= f * t;
                }
            });
        }
    }

    // Coil-wall: normal penalty plus Coulomb friction, carrying P_int + P_cc.
    const bool have_wall = !wall.empty();
    for (int i = 0; i < n_ins; ++i) {
        ext[i] = cc[i];
        if (!have_wall) continue;

        WallDistanceCache::Sample ws;
        if (cache) {
            ws = cache->query(wall, s.x[i], static_cast<std::size_t>(i), 0.75 * d2);
            if (!ws.valid) continue;
        } else {
            const ClosestHit hit = wall.closest(s.x[i]);
            const Vec3 n_mesh = wall.mesh().tri_normal[hit.prim];
            ws.signed_dist = dot(s.x[i] - hit.point, n_mesh) < 0.0 ? hit.dist : -hit.dist;
            ws.normal = -n_mesh;
        }

        const double eps = 0.5 * d2 - ws.signed_dist;
        if (eps <= 0.0) continue;
        const Vec3 nw = ws.normal;
        const Vec3 carried = internal[i] + cc[i];
        const double p_perp = std::abs(dot(carried, nw));

        Vec3 f = nw * (-p_perp + params.k_cw * eps - params.gamma_w * dot(s.v[i], nw));
        const Vec3 v_par = s.v[i] - nw * dot(s.v[i], nw);
        const double v_par_norm = norm(v_par);
        if (params.mu_w > 0.0 && v_par_norm > params.v_eps)
            f -= v_par * (params.mu_w * p_perp / v_par_norm);
        ext[i] += f;
    }
    return ext;
}

}  // namespace vasc
