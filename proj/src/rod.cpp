#include "vasctk/rod.hpp"

#include <cmath>
#include <stdexcept>

#include "vasctk/rotation.hpp"

namespace vasc {

namespace {

// Curvature binormal at vertex i: 2 e^{i-1} x e^i / (|e-bar^{i-1}||e-bar^i| + e^{i-1}.e^i).
Vec3 curvature_binormal(const Vec3& e_prev, const Vec3& e_next, double rest_prev,
                        double rest_next) {
    const double den = rest_prev * rest_next + dot(e_prev, e_next);
    return cross(e_prev, e_next) * (2.0 / den);
}

Vec3 transport(const Vec3& from_dir, const Vec3& to_dir, const Vec3& vec) {
    if (dot(from_dir, to_dir) <= -1.0 + 1e-12)
        throw std::runtime_error("rod: antiparallel tangents in frame transport");
    return rotation_between(from_dir, to_dir) * vec;
}

}  // namespace

void RodState::update_directors() {
    const int ne = edge_count();
    for (int j = 0; j < ne; ++j) {
        const Vec3 e = x[j + 1] - x[j];
        const double len = norm(e);
        if (len <= 0.0) throw std::runtime_error("rod: collapsed edge");
        const Vec3 t_new = e / len;
        Vec3 d = transport(e_hat[j], t_new, d1[j]);
        d -= t_new * dot(d, t_new);
        d = normalized(d);
        d1[j] = d;
        d2[j] = cross(t_new, d);
        e_hat[j] = t_new;
    }
}

// Edge directors chained by edge-to-edge transport: the discrete geometric
// twist of such a chain is zero by construction, which realizes the
// zero-natural-twist convention exactly.
static void chain_edge_directors(const std::vector<Vec3>& pts, std::vector<Vec3>& ehat,
                                 std::vector<Vec3>& d1, std::vector<Vec3>& d2) {
    const std::size_t n = pts.size();
    ehat.resize(n - 1);
    d1.resize(n - 1);
    d2.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Vec3 e = pts[j + 1] - pts[j];
        const double len = norm(e);
        if (len <= 0.0) throw std::invalid_argument("rod: coincident consecutive points");
        ehat[j] = e / len;
    }
    Vec3 ref = std::abs(ehat[0].x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    d1[0] = normalized(ref - ehat[0] * dot(ref, ehat[0]));
    d2[0] = cross(ehat[0], d1[0]);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        Vec3 d = transport(ehat[j - 1], ehat[j], d1[j - 1]);
        d -= ehat[j] * dot(d, ehat[j]);
        d1[j] = normalized(d);
        d2[j] = cross(ehat[j], d1[j]);
    }
}

RodNaturals natural_helix(double helix_diameter, double wavelength, double total_length, int n) {
    if (n < 3) throw std::invalid_argument("natural_helix: need at least 3 points");
    if (helix_diameter <= 0.0 || wavelength <= 0.0 || total_length <= 0.0)
        throw std::invalid_argument("natural_helix: dimensions must be positive");

    const double radius = 0.5 * helix_diameter;
    const double pitch = wavelength / (2.0 * M_PI);       // axial advance per radian
    const double speed = std::sqrt(radius * radius + pitch * pitch);  // |d curve / d phi|

    std::vector<Vec3> pts(n);
    for (int k = 0; k < n; ++k) {
        const double phi = total_length * k / ((n - 1) * speed);
        pts[k] = {radius * std::cos(phi), radius * std::sin(phi), pitch * phi};
    }

    RodNaturals nat;
    nat.shape = pts;
    nat.rest_len.resize(n - 1);
    for (int j = 0; j + 1 < n; ++j) nat.rest_len[j] = norm(pts[j + 1] - pts[j]);
    nat.voronoi.assign(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) nat.voronoi[i] = 0.5 * (nat.rest_len[i - 1] + nat.rest_len[i]);

    std::vector<Vec3> d1, d2, ehat;
    chain_edge_directors(pts, ehat, d1, d2);

    nat.kappa.assign(n, {0.0, 0.0});
    nat.twist.assign(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        const Vec3 kb = curvature_binormal(pts[i] - pts[i - 1], pts[i + 1] - pts[i],
                                           nat.rest_len[i - 1], nat.rest_len[i]);
        const Vec3 m1 = (d1[i - 1] + d1[i]) * 0.5;
        const Vec3 m2 = (d2[i - 1] + d2[i]) * 0.5;
        nat.kappa[i] = {dot(kb, m2), -dot(kb, m1)};
    }
    return nat;
}

RodState make_rod(RodNaturals naturals, RodMaterial material, std::vector<Vec3> positions,
                  std::vector<double> masses, double damping) {
    const std::size_t n = positions.size();
    if (n < 3) throw std::invalid_argument("make_rod: need at least 3 points");
    if (naturals.rest_len.size() != n - 1)
        throw std::invalid_argument("make_rod: naturals do not match point count");
    if (masses.size() != n) throw std::invalid_argument("make_rod: mass count mismatch");
    for (double l : naturals.rest_len)
        if (l <= 0.0) throw std::invalid_argument("make_rod: natural edge lengths must be positive");

    RodState s;
    s.x = std::move(positions);
    s.v.assign(n, Vec3{});
    s.nat = std::move(naturals);
    s.mat = material;
    s.mass = std::move(masses);
    s.damping = damping;
    s.inserted_count = static_cast<int>(n);

    chain_edge_directors(s.x, s.e_hat, s.d1, s.d2);
    return s;
}

RodState make_rod_at_naturals(RodNaturals naturals, RodMaterial material, double node_mass,
                              double damping) {
    std::vector<Vec3> pos = naturals.shape;
    std::vector<double> masses(pos.size(), node_mass);
    return make_rod(std::move(naturals), material, std::move(pos), std::move(masses), damping);
}

std::array<double, 2> vertex_kappa(const RodState& s, int i) {
    const Vec3 kb = curvature_binormal(s.x[i] - s.x[i - 1], s.x[i + 1] - s.x[i],
                                       s.nat.rest_len[i - 1], s.nat.rest_len[i]);
    const Vec3 m1 = (s.d1[i - 1] + s.d1[i]) * 0.5;
    const Vec3 m2 = (s.d2[i - 1] + s.d2[i]) * 0.5;
    return {dot(kb, m2), -dot(kb, m1)};
}

double vertex_twist(const RodState& s, int i) {
    // Tangents come from the current positions; the directors are frozen
    // per-step data, so the twist is a differentiable function of x.
    const Vec3 t_prev = normalized(s.x[i] - s.x[i - 1]);
    const Vec3 t_next = normalized(s.x[i + 1] - s.x[i]);
    const Vec3 d_prev = transport(t_prev, t_next, s.d1[i - 1]);
    return std::atan2(dot(cross(d_prev, s.d1[i]), t_next), dot(d_prev, s.d1[i]));
}

RodEnergyBreakdown elastic_energy(const RodState& s) {
    RodEnergyBreakdown e;
    const int n = static_cast<int>(s.size());
    for (int j = 0; j + 1 < n; ++j) {
        const double len = norm(s.x[j + 1] - s.x[j]);
        const double eps = len / s.nat.rest_len[j] - 1.0;
        e.stretch += 0.5 * s.mat.alpha_s * eps * eps * s.nat.rest_len[j];
    }
    for (int i = 1; i + 1 < n; ++i) {
        const double li = s.nat.voronoi[i];
        const auto k = vertex_kappa(s, i);
        const double dk1 = k[0] - s.nat.kappa[i][0];
        const double dk2 = k[1] - s.nat.kappa[i][1];
        e.bending += 0.5 * s.mat.beta_b / li * (dk1 * dk1 + dk2 * dk2);
        const double dt = vertex_twist(s, i) - s.nat.twist[i];
        e.torsion += 0.5 * s.mat.beta_t / li * dt * dt;
    }
    return e;
}

std::vector<Vec3> internal_forces(const RodState& s) {
    const int n = static_cast<int>(s.size());
    std::vector<Vec3> force(n, Vec3{});

    // Stretching.
    for (int j = 0; j + 1 < n; ++j) {
        const Vec3 e = s.x[j + 1] - s.x[j];
        const double len = norm(e);
        const double eps = len / s.nat.rest_len[j] - 1.0;
        const Vec3 g = e * (s.mat.alpha_s * eps / len);  // dE/de
        force[j] += g;
        force[j + 1] -= g;
    }

    // Bending and twist share the per-vertex stencil.
    for (int i = 1; i + 1 < n; ++i) {
        const Vec3 e_prev = s.x[i] - s.x[i - 1];
        const Vec3 e_next = s.x[i + 1] - s.x[i];
        const double rest_prev = s.nat.rest_len[i - 1];
        const double rest_next = s.nat.rest_len[i];
        const double den = rest_prev * rest_next + dot(e_prev, e_next);
        const Vec3 kb = cross(e_prev, e_next) * (2.0 / den);
        const double li = s.nat.voronoi[i];

        const Vec3 m1 = (s.d1[i - 1] + s.d1[i]) * 0.5;
        const Vec3 m2 = (s.d2[i - 1] + s.d2[i]) * 0.5;
        const double k1 = dot(kb, m2), k2 = -dot(kb, m1);
        // dE/d(kb) for the bending term.
        const Vec3 g = (m2 * (k1 - s.nat.kappa[i][0]) - m1 * (k2 - s.nat.kappa[i][1])) *
                       (s.mat.beta_b / li);

        const double kb_g = dot(kb, g);
        const Vec3 dE_deprev = (cross(e_next, g) * 2.0 - e_next * kb_g) * (1.0 / den);
        const Vec3 dE_denext = (cross(e_prev, g) * -2.0 - e_prev * kb_g) * (1.0 / den);
        force[i - 1] += dE_deprev;                 // -( -dE/de_prev )
        force[i] -= dE_deprev - dE_denext;
        force[i + 1] -= dE_denext;

        // Twist term: grad of the vertex twist w.r.t. positions.
        const double dE_dtheta = s.mat.beta_t / li * (vertex_twist(s, i) - s.nat.twist[i]);
        if (dE_dtheta != 0.0) {
            const Vec3 g_prev = kb * (0.5 / norm(e_prev));   // d(theta_i)/dx_{i-1} = -this
            const Vec3 g_next = kb * (0.5 / norm(e_next));   // d(theta_i)/dx_{i+1} = +this
            force[i - 1] += g_prev * dE_dtheta;
            force[i] -= (g_prev - g_next) * dE_dtheta;
            force[i + 1] -= g_next * dE_dtheta;
        }
    }
    return force;
}

double kinetic_energy(const RodState& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) e += 0.5 * s.mass[i] * norm2(s.v[i]);
    return e;
}

}  // namespace vasc
