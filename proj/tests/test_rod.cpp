#include <cmath>
#include <random>

#include "doctest.h"
#include "vasctk/deploy.hpp"
#include "vasctk/rod.hpp"
#include "vasctk/rod_contact.hpp"
#include "vasctk/shapes.hpp"

using namespace vasc;

namespace {

// Independent transcription of the three energy sums, reading the same
// discrete quantities through the public accessors.
double energy_oracle(const RodState& s) {
    const int n = static_cast<int>(s.size());
    double stretch = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        const double eps = norm(s.x[j + 1] - s.x[j]) / s.nat.rest_len[j] - 1.0;
        stretch += 0.5 * s.mat.alpha_s * eps * eps * s.nat.rest_len[j];
    }
    double torsion = 0.0, bending = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double dt = vertex_twist(s, i) - s.nat.twist[i];
        torsion += 0.5 * s.mat.beta_t / s.nat.voronoi[i] * dt * dt;
        const auto k = vertex_kappa(s, i);
        const double d1 = k[0] - s.nat.kappa[i][0], d2 = k[1] - s.nat.kappa[i][1];
        bending += 0.5 * s.mat.beta_b / s.nat.voronoi[i] * (d1 * d1 + d2 * d2);
    }
    return stretch + torsion + bending;
}

RodState random_rod(std::mt19937_64& rng, int n = 14) {
    RodNaturals nat = natural_helix(4.0, 2.0 * M_PI * 0.45, 0.225 * (n - 1), n);
    std::uniform_real_distribution<double> d(-0.05, 0.05);
    std::vector<Vec3> pos = nat.shape;
    for (Vec3& p : pos) p += Vec3{d(rng), d(rng), d(rng)};
    std::vector<double> masses(n, 2.7e-7);
    return make_rod(std::move(nat), RodMaterial{}, std::move(pos), std::move(masses), 0.2);
}

double fd_gradient_check(const RodState& s) {
    const auto force = internal_forces(s);
    double mean_edge = 0.0;
    for (double l : s.nat.rest_len) mean_edge += l;
    mean_edge /= s.nat.rest_len.size();
    const double h = 1e-6 * mean_edge;

    double worst_rel = 0.0, fmax = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) fmax = std::max(fmax, norm(force[i]));
    RodState probe = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            probe.x[i][c] = s.x[i][c] + h;
            const double ep = energy_oracle(probe);
            probe.x[i][c] = s.x[i][c] - h;
            const double em = energy_oracle(probe);
            probe.x[i][c] = s.x[i][c];
            const double fd = -(ep - em) / (2.0 * h);
            worst_rel = std::max(worst_rel, std::abs(fd - force[i][c]) / std::max(fmax, 1e-12));
        }
    }
    return worst_rel;
}

}  // namespace

TEST_CASE("bending stiffness scaling and spot value") {
    CoilSpec spec;
    spec.d1 = 0.05;
    spec.d2 = 0.3;
    spec.d3 = 4.0;
    spec.shear_modulus = 82e9;
    spec.pitch = 1.0;
    const double base = bending_stiffness(spec);

    CoilSpec d1x2 = spec;
    d1x2.d1 = 0.1;
    CHECK(bending_stiffness(d1x2) == doctest::Approx(16.0 * base).epsilon(1e-12));

    CoilSpec d2x2 = spec;
    d2x2.d2 = 0.6;
    d2x2.d3 = 4.0;
    CHECK(bending_stiffness(d2x2) == doctest::Approx(base / 8.0).epsilon(1e-12));

    // One-line SI evaluation, also cross-checked in mm/GPa units.
    const double si = std::pow(0.05e-3, 4) * 82e9 / (8.0 * std::pow(0.3e-3, 3));
    const double mm_gpa = std::pow(0.05, 4) * 82.0 / (8.0 * std::pow(0.3, 3)) * 1e9 * 1e-3;
    CHECK(base == doctest::Approx(si).epsilon(1e-12));
    CHECK(base == doctest::Approx(mm_gpa).epsilon(1e-9));

    CoilSpec bad = spec;
    bad.pitch = 0.0;
    CHECK_THROWS_AS(bending_stiffness(bad), std::invalid_argument);
}

TEST_CASE("natural_helix: arc length, curvature, and the straight limit") {
    const double d3 = 4.0, ph = 2.0 * M_PI * 0.45, L = 50.0;
    const int n = 600;
    RodNaturals nat = natural_helix(d3, ph, L, n);

    double total = 0.0;
    for (double l : nat.rest_len) total += l;
    CHECK(std::abs(total - L) < 1e-6);

    // Discrete curvature |kappa| / voronoi length approaches the closed-form
    // helix curvature R/(R^2 + p^2).
    const double R = 0.5 * d3, p = ph / (2.0 * M_PI);
    const double kappa_cont = R / (R * R + p * p);
    for (int i = 10; i < n - 10; i += 50) {
        const double k = std::hypot(nat.kappa[i][0], nat.kappa[i][1]) / nat.voronoi[i];
        CHECK(std::abs(k - kappa_cont) / kappa_cont < 0.01);
    }

    SUBCASE("huge wavelength gives a near-straight natural shape") {
        RodNaturals straight = natural_helix(d3, 1e6 * d3, L, 100);
        for (int i = 1; i < 99; ++i)
            CHECK(std::hypot(straight.kappa[i][0], straight.kappa[i][1]) / straight.voronoi[i] <
                  1e-5);
    }
}

TEST_CASE("elastic energy vanishes exactly at the natural shape") {
    RodNaturals nat = natural_helix(4.0, 2.0 * M_PI * 0.45, 20.0, 90);
    const RodState rod = make_rod_at_naturals(std::move(nat), RodMaterial{}, 2.7e-7, 0.2);
    const RodEnergyBreakdown e = elastic_energy(rod);
    CHECK(std::abs(e.stretch) < 1e-12);
    CHECK(std::abs(e.torsion) < 1e-12);
    CHECK(std::abs(e.bending) < 1e-12);

    SUBCASE("forces vanish at the natural shape") {
        for (const Vec3& f : internal_forces(rod)) CHECK(norm(f) < 1e-10);
    }
}

TEST_CASE("stretching a single edge produces the printed energy") {
    // Straight natural shape so bending/torsion stay zero under axial moves.
    RodNaturals nat = natural_helix(4.0, 1e6 * 4.0, 10.0, 11);
    RodState rod = make_rod_at_naturals(std::move(nat), RodMaterial{}, 2.7e-7, 0.2);

    const int j = 5;
    const double rest = rod.nat.rest_len[j];
    const Vec3 dir = normalized(rod.x[j + 1] - rod.x[j]);
    const Vec3 shift = dir * (0.1 * rest);
    for (std::size_t k = j + 1; k < rod.size(); ++k) rod.x[k] += shift;

    const RodEnergyBreakdown e = elastic_energy(rod);
    CHECK(e.stretch == doctest::Approx(0.5 * rod.mat.alpha_s * 0.01 * rest).epsilon(1e-9));
    CHECK(std::abs(e.bending) < 1e-9);
    CHECK(std::abs(e.torsion) < 1e-9);
}

TEST_CASE("elastic energy matches the independent transcription on random states") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 20; ++k) {
        const RodState rod = random_rod(rng);
        CHECK(elastic_energy(rod).total() ==
              doctest::Approx(energy_oracle(rod)).epsilon(1e-12));
    }
}

TEST_CASE("internal forces match central finite differences") {
    std::mt19937_64 rng(43);
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) worst = std::max(worst, fd_gradient_check(random_rod(rng)));
    CHECK(worst < 1e-4);
}

TEST_CASE("internal forces are self-equilibrated") {
    std::mt19937_64 rng(47);
    for (int k = 0; k < 10; ++k) {
        const auto force = internal_forces(random_rod(rng));
        Vec3 total{};
        for (const Vec3& f : force) total += f;
        CHECK(norm(total) < 1e-9);
    }
}

TEST_CASE("coil-coil contact: distant strands feel nothing, close ones repel") {
    ContactParams params;
    params.coil_diameter = 0.45;

    // One rod folded into two parallel strands; intra-strand spacing 0.5
    // stays clear of the D2 = 0.45 threshold so only cross-strand pairs act.
    auto build = [&](double gap) {
        RodNaturals nat = natural_helix(4.0, 1e6, 0.5 * 7, 8);
        std::vector<Vec3> pos = {{0, 0, 0},     {0.5, 0, 0},   {1.0, 0, 0},   {1.5, 0, 0},
                                 {1.5, gap, 0}, {1.0, gap, 0}, {0.5, gap, 0}, {0, gap, 0}};
        std::vector<double> masses(8, 1e-6);
        RodState s = make_rod(std::move(nat), RodMaterial{}, std::move(pos), std::move(masses),
                              0.2);
        return s;
    };

    const RodState far_state = build(5.0);
    const auto zero_internal = std::vector<Vec3>(far_state.size(), Vec3{});
    const auto f_far =
        contact_forces(far_state, TriBvh{}, params, zero_internal, nullptr, 1);
    // Distance 5 mm >> D2: the cross-strand forces vanish; only the rod's own
    // neighborhood (excluded) could contribute.
    for (const Vec3& f : f_far) CHECK(norm(f) == 0.0);

    const RodState near_state = build(0.3);  // overlap: 0.45 - 0.3 > 0
    const auto f_near =
        contact_forces(near_state, TriBvh{}, params, zero_internal, nullptr, 1);
    CHECK(norm(f_near[1]) > 0.0);
    CHECK(f_near[1].y < 0.0);   // pushed away from the other strand
    CHECK(f_near[6].y > 0.0);

    SUBCASE("Newton's third law with edge reaction enabled") {
        Vec3 total{};
        for (const Vec3& f : f_near) total += f;
        CHECK(norm(total) < 1e-9);
    }
}

TEST_CASE("wall contact: static penetration and Coulomb friction") {
    // Large box cage; probe a node near the z = 0 floor (inside is z > 0).
    const TriMesh box = make_box({-50, -50, 0}, {50, 50, 100});
    const TriBvh bvh(box);

    ContactParams params;
    params.coil_diameter = 0.45;
    params.k_cw = 2e4;
    params.gamma_w = 0.0;
    params.mu_w = 0.0;

    RodNaturals nat = natural_helix(4.0, 1e6, 0.9, 3);
    std::vector<Vec3> pos = {{-0.45, 0, 0.1}, {0, 0, 0.1}, {0.45, 0, 0.1}};
    std::vector<double> masses(3, 1e-6);
    RodState rod = make_rod(std::move(nat), RodMaterial{}, std::move(pos), std::move(masses), 0.2);

    const std::vector<Vec3> no_force(3, Vec3{});
    const double eps = 0.5 * 0.45 - 0.1;  // penetration of the offset surface

    SUBCASE("zero velocity, zero carried force: pure stiffness response") {
        const auto f = contact_forces(rod, bvh, params, no_force, nullptr, 1);
        CHECK(f[1].z == doctest::Approx(params.k_cw * eps).epsilon(1e-9));
        CHECK(std::abs(f[1].x) < 1e-12);
    }

    SUBCASE("sliding node feels Coulomb friction opposing the motion") {
        params.mu_w = 0.2;
        rod.v[1] = {3.0, 0, 0};
        std::vector<Vec3> carried(3, Vec3{});
        carried[1] = {0, 0, -7.0};  // pressed onto the floor
        const auto f = contact_forces(rod, bvh, params, carried, nullptr, 1);
        CHECK(f[1].x == doctest::Approx(-params.mu_w * 7.0).epsilon(1e-9));
        // Normal part: -|P_perp| + k eps.
        CHECK(f[1].z == doctest::Approx(-7.0 + params.k_cw * eps).epsilon(1e-9));

        SUBCASE("zero tangential velocity regularized to zero friction") {
            rod.v[1] = {0, 0, 0};
            const auto f0 = contact_forces(rod, bvh, params, carried, nullptr, 1);
            CHECK(std::abs(f0[1].x) == 0.0);
        }
    }
}

TEST_CASE("step: a natural rod at rest stays put") {
    RodNaturals nat = natural_helix(4.0, 2.0 * M_PI * 0.45, 9.0, 41);
    RodState rod = make_rod_at_naturals(std::move(nat), RodMaterial{}, 2.7e-7, 0.2);
    const std::vector<Vec3> x0 = rod.x;

    StepContext ctx;
    ctx.dt = 1e-6;
    ctx.insertion_velocity = 0.0;
    ctx.contact.k_cc = 0.0;  // no contacts
    for (int k = 0; k < 200; ++k) step(rod, ctx);
    for (std::size_t i = 0; i < rod.size(); ++i) CHECK(norm(rod.x[i] - x0[i]) < 1e-9);
}

TEST_CASE("step: damped free oscillation dissipates mechanical energy") {
    std::mt19937_64 rng(53);
    RodState rod = random_rod(rng, 12);

    StepContext ctx;
    ctx.dt = 2e-7;
    ctx.insertion_velocity = 0.0;
    ctx.contact.k_cc = 0.0;

    // Let the initial transient pass, then demand monotone decay.
    double prev = elastic_energy(rod).total() + kinetic_energy(rod);
    for (int k = 0; k < 2000; ++k) step(rod, ctx);
    prev = elastic_energy(rod).total() + kinetic_energy(rod);
    for (int block = 0; block < 10; ++block) {
        for (int k = 0; k < 1000; ++k) step(rod, ctx);
        const double now = elastic_energy(rod).total() + kinetic_energy(rod);
        CHECK(now <= prev * (1.0 + 1e-9));
        prev = now;
    }
}

TEST_CASE("step: geometric velocity decay is exact without elasticity") {
    RodNaturals nat = natural_helix(4.0, 1e6, 2.0, 5);
    RodMaterial soft;
    soft.alpha_s = 0.0;
    soft.beta_b = 0.0;
    soft.beta_t = 0.0;
    std::vector<Vec3> pos = nat.shape;
    std::vector<double> masses(5, 4e-7);
    RodState rod = make_rod(std::move(nat), soft, std::move(pos), std::move(masses), 0.2);
    for (std::size_t i = 0; i < rod.size(); ++i) rod.v[i] = {1.0 * (i + 1), -0.5, 0.25};

    StepContext ctx;
    ctx.dt = 1e-6;
    ctx.insertion_velocity = 0.0;
    ctx.contact.k_cc = 0.0;

    const double factor = 1.0 - ctx.dt * rod.damping / rod.mass[0];
    std::vector<Vec3> v0 = rod.v;
    for (int k = 1; k <= 20; ++k) {
        step(rod, ctx);
        for (std::size_t i = 0; i < rod.size(); ++i) {
            CHECK(rod.v[i].x == doctest::Approx(v0[i].x * std::pow(factor, k)).epsilon(1e-12));
            CHECK(rod.v[i].y == doctest::Approx(v0[i].y * std::pow(factor, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("step: node settles where the wall stiffness balances the load") {
    const TriMesh box = make_box({-50, -50, 0}, {50, 50, 100});
    const TriBvh bvh(box);

    RodNaturals nat = natural_helix(4.0, 1e6, 0.9, 3);
    RodMaterial none;
    none.alpha_s = 0.0;
    none.beta_b = 0.0;
    none.beta_t = 0.0;
    std::vector<Vec3> pos = {{-0.45, 0, 0.5}, {0, 0, 0.5}, {0.45, 0, 0.5}};
    std::vector<double> masses(3, 1e-6);
    RodState rod = make_rod(std::move(nat), none, std::move(pos), std::move(masses), 0.02);

    StepContext ctx;
    ctx.wall = &bvh;
    ctx.dt = 1e-6;
    ctx.insertion_velocity = 0.0;
    ctx.contact.k_cc = 0.0;
    ctx.contact.k_cw = 2e4;
    ctx.contact.gamma_w = 0.5;
    ctx.contact.mu_w = 0.0;
    ctx.body_force = {0, 0, -2.0};  // constant push toward the floor

    for (int k = 0; k < 400000; ++k) step(rod, ctx);

    // Static balance: k_cw * eps = |body force| (no carried elastic force).
    const double eps_expect = 2.0 / ctx.contact.k_cw;
    const double z_expect = 0.5 * ctx.contact.coil_diameter - eps_expect;
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(rod.v[i].z) < 1e-4);
        CHECK(rod.x[i].z == doctest::Approx(z_expect).epsilon(1e-3));
    }
}

TEST_CASE("run_deployment: zero target length gives an empty coil") {
    const TriMesh cage = make_icosphere(2.0, 3);
    CoilSpec spec;
    ContactParams params;
    InsertionSite site;
    site.ostium_point = {0, 0, -1.8};
    site.direction = {0, 0, 1};
    DeploymentTarget target;
    target.length = 0.0;
    const DeploymentResult r = run_deployment(spec, cage, params, site, target);
    CHECK(r.packing_density == 0.0);
    CHECK(r.completed);
}

TEST_CASE("run_deployment rejects an open cage before simulating") {
    TriMesh open_cage = make_icosphere(2.0, 2);
    open_cage.triangles.pop_back();
    open_cage.update_cache();
    CoilSpec spec;
    ContactParams params;
    InsertionSite site;
    DeploymentTarget target;
    target.length = 10.0;
    CHECK_THROWS_AS(run_deployment(spec, open_cage, params, site, target),
                    std::invalid_argument);
}

TEST_CASE("closed-form packing density for a known inserted length") {
    // c_g = pi (D2/2)^2 L / V on a 2 mm sphere with 378 mm of 0.45 mm wire.
    const double v_sphere = 4.0 / 3.0 * M_PI * 8.0;
    const double cg = M_PI * 0.225 * 0.225 * 378.0 / v_sphere;
    CHECK(cg == doctest::Approx(1.7945).epsilon(1e-3));  // sanity: would overfill
}
