#include "vasctk/deploy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vasc {

namespace {
constexpr double kPlatinumDensity = 2.145e-5;  // kg/mm^3
}

void CoilSpec::validate() const {
    if (!(d1 > 0.0 && d1 < d2 && d2 < d3))
        throw std::invalid_argument("CoilSpec: require D1 < D2 < D3, all positive");
    if (total_length <= 0.0) throw std::invalid_argument("CoilSpec: total length must be positive");
    if (pitch <= 0.0) throw std::invalid_argument("CoilSpec: pitch must be positive");
    if (dt <= 0.0) throw std::invalid_argument("CoilSpec: dt must be positive");
    if (material_points < 3) throw std::invalid_argument("CoilSpec: need at least 3 points");
}

double bending_stiffness(const CoilSpec& spec) {
    if (spec.pitch <= 0.0) throw std::invalid_argument("bending_stiffness: pitch must be positive");
    const double d1_m = spec.d1 * 1e-3;
    const double d2_m = spec.d2 * 1e-3;
    return std::pow(d1_m, 4) * spec.shear_modulus / (8.0 * std::pow(d2_m, 3) * spec.pitch);
}

double coil_line_density(const CoilSpec& spec) {
    const double wire_area = M_PI * 0.25 * spec.d1 * spec.d1;       // mm^2
    const double winding_factor = M_PI * spec.d2 / spec.d1;         // wire length per coil length
    return kPlatinumDensity * wire_area * winding_factor;           // kg/mm
}

void step(RodState& s, const StepContext& ctx) {
    const int n = static_cast<int>(s.size());
    const int n_ins = s.inserted_count;

    static const TriBvh empty_bvh;
    const std::vector<Vec3> p_int = internal_forces(s);
    std::vector<Vec3> p_ext;
    if (ctx.wall != nullptr || ctx.contact.k_cc > 0.0)
        p_ext = contact_forces(s, ctx.wall ? *ctx.wall : empty_bvh, ctx.contact, p_int, ctx.cache,
                               ctx.exclusion);
    else
        p_ext.assign(n, Vec3{});

    const Vec3 feed = ctx.site.direction * ctx.insertion_velocity;
    double check = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i < n_ins) {
            const Vec3 f = p_int[i] + p_ext[i] + ctx.body_force - s.v[i] * s.damping;
            s.v[i] += f * (ctx.dt / s.mass[i]);
        } else {
            s.v[i] = feed;
        }
        const Vec3 dx = s.v[i] * ctx.dt;
        s.x[i] += dx;
        if (ctx.cache && i < n_ins) ctx.cache->note_motion(i, norm(dx));
        check += s.v[i].x + s.x[i].x;
    }
    if (!std::isfinite(check))
        throw std::runtime_error("rod step: non-finite state (reduce dt or stiffness)");

    s.update_directors();

    // Nodes become inserted once they cross the ostium plane by the trigger
    // offset, keeping fresh nodes clear of immediate cap contact.
    const double trigger =
        ctx.site.trigger_offset >= 0.0 ? ctx.site.trigger_offset : 0.55 * ctx.contact.coil_diameter;
    while (s.inserted_count < n) {
        const Vec3& cand = s.x[s.inserted_count];
        if (dot(cand - ctx.site.ostium_point, ctx.site.direction) < trigger) break;
        s.v[s.inserted_count] = feed;
        ++s.inserted_count;
    }
}

DeploymentResult run_deployment(const CoilSpec& spec, const TriMesh& wall,
                                const ContactParams& params, const InsertionSite& site,
                                const DeploymentTarget& target, const DeploymentOptions& options) {
    spec.validate();
    params.validate();
    if (!is_closed(wall))
        throw std::invalid_argument("run_deployment: cage mesh must be closed");

    const SurfaceMeasure vol = measure(wall);
    const double wire_area = M_PI * 0.25 * spec.d2 * spec.d2;  // mm^2

    double target_length = spec.total_length;
    if (target.length) target_length = *target.length;
    if (target.packing_density)
        target_length = std::min(target_length, *target.packing_density * vol.volume / wire_area);
    target_length = std::min(target_length, spec.total_length);

    DeploymentResult result;
    result.cavity_volume = vol.volume;
    if (target_length <= 0.0) {
        result.completed = true;
        return result;
    }

    const double spacing = spec.node_spacing();
    // Feed enough nodes for the target plus a short exterior tail.
    const int n_nodes =
        std::min(spec.material_points,
                 static_cast<int>(std::ceil(target_length / spacing)) + 3);

    RodNaturals nat = natural_helix(spec.d3, spec.helix_wavelength, spacing * (n_nodes - 1),
                                    n_nodes);

    const Vec3 dir = normalized(site.direction);
    std::vector<Vec3> pos(n_nodes);
    for (int k = 0; k < n_nodes; ++k)
        pos[k] = site.ostium_point - dir * (spacing * k + 0.25 * spec.d2);

    std::vector<double> masses(n_nodes, coil_line_density(spec) * spacing);
    RodState state = make_rod(std::move(nat), spec.material, std::move(pos), std::move(masses),
                              spec.damping);
    state.inserted_count = 0;

    const TriBvh bvh(wall);
    WallDistanceCache cache;
    cache.reset(state.size());

    StepContext ctx;
    ctx.wall = &bvh;
    ctx.contact = params;
    ctx.contact.coil_diameter = spec.d2;
    ctx.site = site;
    ctx.site.direction = dir;
    ctx.dt = spec.dt;
    ctx.insertion_velocity = spec.insertion_velocity;
    ctx.cache = &cache;
    ctx.exclusion = -1;

    auto inserted_length = [&]() {
        return state.inserted_count > 1 ? spacing * (state.inserted_count - 1) : 0.0;
    };

    int step_index = 0;
    try {
        while (inserted_length() < target_length && state.inserted_count < n_nodes &&
               step_index < options.max_steps) {
            step(state, ctx);
            ++step_index;
            if (options.energy_log_every > 0 && step_index % options.energy_log_every == 0 &&
                options.on_log)
                options.on_log(step_index, state, elastic_energy(state).total());
        }

        // Catheter removal: drop the exterior tail, then settle at dt/10.
        const int keep = std::max(3, state.inserted_count);
        state.x.resize(keep);
        state.v.resize(keep);
        state.d1.resize(keep - 1);
        state.d2.resize(keep - 1);
        state.e_hat.resize(keep - 1);
        state.nat.rest_len.resize(keep - 1);
        state.nat.voronoi.resize(keep);
        state.nat.kappa.resize(keep);
        state.nat.twist.resize(keep);
        state.inserted_count = keep;
        cache.reset(state.size());

        ctx.dt = spec.dt * 0.1;
        ctx.insertion_velocity = 0.0;
        for (int k = 0; k < options.settle_steps; ++k) {
            step(state, ctx);
            ++step_index;
            if (options.energy_log_every > 0 && step_index % options.energy_log_every == 0 &&
                options.on_log)
                options.on_log(step_index, state, elastic_energy(state).total());
        }
        result.completed = inserted_length() >= target_length - spacing;
        if (!result.completed)
            result.warning = "deployment stopped before reaching the target length";
    } catch (const std::runtime_error& err) {
        result.warning = err.what();
        result.completed = false;
    }

    result.inserted_length = inserted_length();
    result.packing_density = wire_area * result.inserted_length / vol.volume;
    for (int i = 0; i < state.inserted_count; ++i) {
        const ClosestHit hit = bvh.closest(state.x[i]);
        const Vec3 nm = wall.tri_normal[hit.prim];
        const double signed_dist = dot(state.x[i] - hit.point, nm) < 0.0 ? hit.dist : -hit.dist;
        result.max_penetration = std::max(result.max_penetration, 0.5 * spec.d2 - signed_dist);
    }
    result.state = std::move(state);
    return result;
}

}  // namespace vasc
