#pragma once
// Discrete elastic rod for coil deployment: material points connected by
// edges, per-edge reference directors, and stretching/torsion/bending
// energies measured against a naturally curved shape.
//
// Unit system of this module: millimeters, kilograms, seconds. Forces are
// kg*mm/s^2, energies kg*mm^2/s^2. Parameter tables are ingested with their
// printed numerals in these units (see CoilSpec).

#include <array>
#include <cstdint>
#include <vector>

#include "vasctk/vec3.hpp"

namespace vasc {

struct RodMaterial {
    double alpha_s = 18.0;    // stretching constant
    double beta_b = 1e-3;     // bending constant
    double beta_t = 73e-5;    // torsion constant
};

// Natural-shape data: rest edges, Voronoi lengths, natural curvature
// 2-vectors (components in the natural shape's transported frames) and
// natural twist.
struct RodNaturals {
    std::vector<double> rest_len;                  // ||e-bar^j||, size n-1
    std::vector<double> voronoi;                   // l-bar_i, size n (interior 1..n-2 valid)
    std::vector<std::array<double, 2>> kappa;      // kappa-bar_i, size n
    std::vector<double> twist;                     // theta-bar_i, size n
    std::vector<Vec3> shape;                       // the natural curve itself (reference)
};

struct RodState {
    std::vector<Vec3> x;      // positions, mm
    std::vector<Vec3> v;      // velocities, mm/s
    std::vector<Vec3> d1, d2; // per-edge reference directors (size n-1)
    std::vector<Vec3> e_hat;  // cached unit edge directions (size n-1)

    RodNaturals nat;
    RodMaterial mat;
    std::vector<double> mass; // kg per node
    double damping = 0.2;     // nu, kg/s
    int inserted_count = 0;   // nodes [0, inserted_count) follow the dynamics

    std::size_t size() const { return x.size(); }
    int edge_count() const { return static_cast<int>(x.size()) - 1; }

    // Refresh e_hat from positions and re-adapt the directors to the edges
    // by time-parallel transport (rotation from the old to the new tangent).
    void update_directors();
};

// Natural data sampled from a helix of diameter `helix_diameter` and
// wavelength `wavelength` at equal arc-length spacing total_length/(n-1).
// Natural twist is zero: the transported frame along the natural shape is
// twist-free by construction.
RodNaturals natural_helix(double helix_diameter, double wavelength, double total_length, int n);

// Rod initialized at the given positions with zero velocity, directors
// transported from a deterministic start frame along the initial shape.
RodState make_rod(RodNaturals naturals, RodMaterial material, std::vector<Vec3> positions,
                  std::vector<double> masses, double damping);

// Rod laid out exactly in its natural shape (E = 0 by construction).
RodState make_rod_at_naturals(RodNaturals naturals, RodMaterial material, double node_mass,
                              double damping);

struct RodEnergyBreakdown {
    double stretch = 0.0, torsion = 0.0, bending = 0.0;
    double total() const { return stretch + torsion + bending; }
};

RodEnergyBreakdown elastic_energy(const RodState& state);

// Discrete curvature 2-vector and geometric twist at interior vertex i,
// measured in the current reference directors.
std::array<double, 2> vertex_kappa(const RodState& state, int i);
double vertex_twist(const RodState& state, int i);

// -dE/dx via analytic gradients, directors held fixed (they are data that
// evolves between steps, not a function of instantaneous positions).
std::vector<Vec3> internal_forces(const RodState& state);

double kinetic_energy(const RodState& state);

}  // namespace vasc
