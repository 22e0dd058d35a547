#include "vasctk/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vasc {

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b, double* t_out) {
    const Vec3 ab = b - a;
    const double den = dot(ab, ab);
    double t = den > 0.0 ? dot(p - a, ab) / den : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (t_out) *t_out = t;
    return a + ab * t;
}

// Ericson, "Real-Time Collision Detection", 5.1.5.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

namespace {

constexpr int kLeafSize = 4;

// Moeller-Trumbore. Returns hit parameter t and a degeneracy flag when the
// hit lies too close to an edge or the triangle is nearly parallel.
bool ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c,
                  double& t, bool& grazing) {
    constexpr double eps_det = 1e-12;
    constexpr double eps_bary = 1e-9;
    const Vec3 e1 = b - a, e2 = c - a;
    const Vec3 pv = cross(d, e2);
    const double det = dot(e1, pv);
    if (std::abs(det) < eps_det) {
        grazing = true;
        return false;
    }
    const double inv = 1.0 / det;
    const Vec3 tv = o - a;
    const double u = dot(tv, pv) * inv;
    if (u < -eps_bary || u > 1.0 + eps_bary) return false;
    const Vec3 qv = cross(tv, e1);
    const double v = dot(d, qv) * inv;
    if (v < -eps_bary || u + v > 1.0 + eps_bary) return false;
    t = dot(e2, qv) * inv;
    if (t <= 0.0) return false;
    grazing = (u < eps_bary || v < eps_bary || u + v > 1.0 - eps_bary);
    return true;
}

bool ray_aabb(const Vec3& o, const Vec3& inv_d, const Aabb& box, double t_max) {
    double t0 = 0.0, t1 = t_max;
    for (int i = 0; i < 3; ++i) {
        double ta = (box.lo[i] - o[i]) * inv_d[i];
        double tb = (box.hi[i] - o[i]) * inv_d[i];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::fmax(t0, ta);
        t1 = std::fmin(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

// Deterministic jitter directions for parity retries.
Vec3 jitter_dir(int attempt) {
    // Small irrational tilts around +x keep the ray generic.
    double a = 0.13474 * attempt + 0.071;
    double b = 0.09241 * attempt + 0.047;
    return normalized(Vec3{1.0, std::sin(a) * 0.029, std::cos(b) * 0.023});
}

}  // namespace

TriBvh::TriBvh(const TriMesh& mesh) : mesh_(&mesh) {
    const int n = static_cast<int>(mesh.triangles.size());
    if (n == 0) return;
    std::vector<Aabb> boxes(n);
    std::vector<Vec3> centers(n);
    std::vector<std::int32_t> ids(n);
    for (int t = 0; t < n; ++t) {
        ids[t] = t;
        Aabb box;
        for (int k = 0; k < 3; ++k) box.expand(mesh.tri_vertex(t, k));
        boxes[t] = box;
        centers[t] = box.center();
    }
    nodes_.reserve(2 * n / kLeafSize + 2);
    build(ids, 0, n, boxes, centers);
    prims_ = std::move(ids);
}

std::int32_t TriBvh::build(std::vector<std::int32_t>& ids, int lo, int hi,
                           std::vector<Aabb>& boxes, std::vector<Vec3>& centers) {
    Node node;
    for (int i = lo; i < hi; ++i) node.box.expand(boxes[ids[i]]);
    const std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (hi - lo <= kLeafSize) {
        nodes_[idx].left = lo;
        nodes_[idx].count = hi - lo;
        return idx;
    }
    const Vec3 ext = node.box.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;
    const int mid = (lo + hi) / 2;
    std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                     [&](std::int32_t a, std::int32_t b) {
                         return centers[a][axis] < centers[b][axis];
                     });
    const std::int32_t l = build(ids, lo, mid, boxes, centers);
    const std::int32_t r = build(ids, mid, hi, boxes, centers);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
}

ClosestHit TriBvh::closest(const Vec3& p, double upper_bound) const {
    ClosestHit best;
    if (nodes_.empty()) return best;
    best.dist = upper_bound;
    double best2 = upper_bound < 1e150 ? upper_bound * upper_bound : 1e300;

    std::int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (node.box.dist2(p) >= best2) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                const int t = prims_[node.left + i];
                const Vec3 q = closest_point_on_triangle(p, mesh_->tri_vertex(t, 0),
                                                         mesh_->tri_vertex(t, 1),
                                                         mesh_->tri_vertex(t, 2));
                const double d2 = norm2(q - p);
                if (d2 < best2) {
                    best2 = d2;
                    best.point = q;
                    best.prim = t;
                }
            }
        } else {
            // Visit the nearer child first.
            const std::int32_t a = node.left, b = node.right;
            const double da = nodes_[a].box.dist2(p), db = nodes_[b].box.dist2(p);
            if (da < db) {
                if (db < best2) stack[sp++] = b;
                if (da < best2) stack[sp++] = a;
            } else {
                if (da < best2) stack[sp++] = a;
                if (db < best2) stack[sp++] = b;
            }
        }
    }
    best.dist = std::sqrt(best2);
    return best;
}

bool TriBvh::first_hit(const Vec3& origin, const Vec3& dir, RayHit& hit) const {
    hit = RayHit{};
    if (nodes_.empty()) return false;
    const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    std::int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (!ray_aabb(origin, inv, node.box, hit.t)) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                const int t = prims_[node.left + i];
                double tt;
                bool grazing = false;
                if (ray_triangle(origin, dir, mesh_->tri_vertex(t, 0), mesh_->tri_vertex(t, 1),
                                 mesh_->tri_vertex(t, 2), tt, grazing) &&
                    tt < hit.t) {
                    hit.t = tt;
                    hit.prim = t;
                }
            }
        } else {
            stack[sp++] = node.left;
            stack[sp++] = node.right;
        }
    }
    return hit.prim >= 0;
}

bool TriBvh::all_crossings(const Vec3& origin, const Vec3& dir, std::vector<double>& ts) const {
    ts.clear();
    if (nodes_.empty()) return true;
    const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    std::int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (!ray_aabb(origin, inv, node.box, 1e300)) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                const int t = prims_[node.left + i];
                double tt;
                bool grazing = false;
                bool hit = ray_triangle(origin, dir, mesh_->tri_vertex(t, 0),
                                        mesh_->tri_vertex(t, 1), mesh_->tri_vertex(t, 2), tt,
                                        grazing);
                if (grazing) return false;
                if (hit) ts.push_back(tt);
            }
        } else {
            stack[sp++] = node.left;
            stack[sp++] = node.right;
        }
    }
    return true;
}

bool TriBvh::inside(const Vec3& p) const {
    std::vector<double> ts;
    for (int attempt = 0; attempt < 16; ++attempt) {
        const Vec3 dir = attempt == 0 ? Vec3{1, 0, 0} : jitter_dir(attempt);
        if (all_crossings(p, dir, ts)) return (ts.size() % 2) == 1;
    }
    throw std::runtime_error("TriBvh::inside: no non-degenerate ray found");
}

SegBvh::SegBvh(std::vector<Vec3> a, std::vector<Vec3> b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() != b_.size()) throw std::invalid_argument("SegBvh: endpoint count mismatch");
    const int n = static_cast<int>(a_.size());
    if (n == 0) return;
    std::vector<Aabb> boxes(n);
    std::vector<Vec3> centers(n);
    std::vector<std::int32_t> ids(n);
    for (int s = 0; s < n; ++s) {
        ids[s] = s;
        boxes[s].expand(a_[s]);
        boxes[s].expand(b_[s]);
        centers[s] = boxes[s].center();
    }
    build(ids, 0, n, boxes, centers);
    prims_ = std::move(ids);
}

std::int32_t SegBvh::build(std::vector<std::int32_t>& ids, int lo, int hi,
                           std::vector<Aabb>& boxes, std::vector<Vec3>& centers) {
    Node node;
    for (int i = lo; i < hi; ++i) node.box.expand(boxes[ids[i]]);
    const std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (hi - lo <= kLeafSize) {
        nodes_[idx].left = lo;
        nodes_[idx].count = hi - lo;
        return idx;
    }
    const Vec3 ext = node.box.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;
    const int mid = (lo + hi) / 2;
    std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                     [&](std::int32_t a, std::int32_t b) {
                         return centers[a][axis] < centers[b][axis];
                     });
    const std::int32_t l = build(ids, lo, mid, boxes, centers);
    const std::int32_t r = build(ids, mid, hi, boxes, centers);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
}

ClosestHit SegBvh::closest(const Vec3& p, double upper_bound) const {
    ClosestHit best;
    if (nodes_.empty()) return best;
    best.dist = upper_bound;
    double best2 = upper_bound < 1e150 ? upper_bound * upper_bound : 1e300;
    std::int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (node.box.dist2(p) >= best2) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                const int s = prims_[node.left + i];
                const Vec3 q = closest_point_on_segment(p, a_[s], b_[s]);
                const double d2 = norm2(q - p);
                if (d2 < best2) {
                    best2 = d2;
                    best.point = q;
                    best.prim = s;
                }
            }
        } else {
            stack[sp++] = node.left;
            stack[sp++] = node.right;
        }
    }
    best.dist = std::sqrt(best2);
    return best;
}

bool SegBvh::any_within(const Vec3& p, double r) const {
    if (nodes_.empty()) return false;
    const double r2 = r * r;
    std::int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (node.box.dist2(p) > r2) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                const int s = prims_[node.left + i];
                if (norm2(closest_point_on_segment(p, a_[s], b_[s]) - p) <= r2) return true;
            }
        } else {
            stack[sp++] = node.left;
            stack[sp++] = node.right;
        }
    }
    return false;
}

}  // namespace vasc
