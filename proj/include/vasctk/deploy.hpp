#pragma once
// Coil deployment: staged node insertion through the ostium plane,
// semi-implicit Euler dynamics with contacts, settling, and packing-density
// reporting.

#include <functional>
#include <optional>
#include <string>

#include "vasctk/rod.hpp"
#include "vasctk/rod_contact.hpp"
#include "vasctk/trimesh.hpp"

namespace vasc {

struct CoilSpec {
    double d1 = 0.05;                   // stock wire diameter, mm
    double d2 = 0.45;                   // coil diameter D2, mm
    double d3 = 4.0;                    // tertiary helix diameter D3, mm
    double shear_modulus = 82e9;        // G, Pa
    double pitch = 1.0;                 // n_p, winding count (dimensionless)
    double total_length = 378.0;        // L, mm
    double helix_wavelength = 2.0 * M_PI * 0.45;  // P_H, mm
    double insertion_velocity = 30.0;   // mm/s
    double dt = 1e-6;                   // s
    int material_points = 1682;
    RodMaterial material{};
    double damping = 0.2;               // nu, kg/s

    void validate() const;
    double node_spacing() const { return total_length / (material_points - 1); }
};

// k_b = D1^4 G / (8 D2^3 n_p), SI units (N/m).
double bending_stiffness(const CoilSpec& spec);

// Platinum micro-coil line density (kg/mm): solid-wire cross section times
// the tight micro-winding length factor pi*D2/D1.
double coil_line_density(const CoilSpec& spec);

struct InsertionSite {
    Vec3 ostium_point{};   // point on the ostium (cap) plane, mm
    Vec3 direction{0, 0, 1};  // unit, pointing into the cavity
    double trigger_offset = -1.0;  // depth past the plane where a node becomes inserted;
                                   // < 0 selects 0.55 * D2
};

struct StepContext {
    const TriBvh* wall = nullptr;
    ContactParams contact{};
    InsertionSite site{};
    double dt = 1e-6;
    double insertion_velocity = 30.0;
    Vec3 body_force{};     // constant per-node force (tests), kg*mm/s^2
    WallDistanceCache* cache = nullptr;
    int exclusion = -1;
};

// One semi-implicit Euler step: velocity update before position update for
// inserted nodes, prescribed insertion velocity for exterior nodes, director
// transport, then the ostium-crossing insertion test. Throws on NaN.
void step(RodState& state, const StepContext& ctx);

struct DeploymentTarget {
    std::optional<double> length;       // mm of wire to insert
    std::optional<double> packing_density;  // c_g
};

struct DeploymentOptions {
    int settle_steps = 50000;       // run at dt/10 after insertion
    int energy_log_every = 0;       // 0 disables
    std::function<void(int, const RodState&, double)> on_log;  // (step, state, energy)
    int max_steps = 50'000'000;
};

struct DeploymentResult {
    RodState state;
    double packing_density = 0.0;
    double inserted_length = 0.0;    // mm
    double cavity_volume = 0.0;      // mm^3
    double max_penetration = 0.0;    // mm, depth beyond the D2/2 offset surface
    bool completed = false;          // false: instability or feed exhausted early
    std::string warning;
};

DeploymentResult run_deployment(const CoilSpec& spec, const TriMesh& wall,
                                const ContactParams& params, const InsertionSite& site,
                                const DeploymentTarget& target,
                                const DeploymentOptions& options = {});

}  // namespace vasc
