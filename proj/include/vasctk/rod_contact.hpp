#pragma once
// Coil-coil and coil-wall contact forces (penalty model with Coulomb wall
// friction), with a linked-cell broad phase and cached wall distances.

#include <vector>

#include "vasctk/bvh.hpp"
#include "vasctk/rod.hpp"

namespace vasc {

struct ContactParams {
    double k_cc = 1e4;     // coil-coil stiffness
    double gamma_cc = 1.0; // coil-coil dissipation
    double k_cw = 2e4;     // coil-wall stiffness
    double gamma_w = 0.1;  // coil-wall dissipation
    double mu_w = 0.2;     // wall friction coefficient
    double coil_diameter = 0.45;  // D2, mm

    // The one-sided printed coil-coil force violates momentum conservation;
    // distributing the reaction to the edge endpoints is the default.
    bool edge_reaction = true;
    double v_eps = 1e-6;   // friction regularization velocity, mm/s

    void validate() const;
};

// Signed wall distance state per node, reused across steps: a fresh BVH
// query only happens once the accumulated travel could have brought the
// node near the wall.
class WallDistanceCache {
public:
    void reset(std::size_t nodes);
    void note_motion(std::size_t i, double dist_moved) { travel_[i] += dist_moved; }

    struct Sample {
        double signed_dist;  // > 0 inside the cavity
        Vec3 normal;         // unit, pointing into the cavity
        bool valid;          // false when the node is certainly out of range
    };
    Sample query(const TriBvh& wall, const Vec3& p, std::size_t i, double range);

private:
    std::vector<double> lower_bound_;  // conservative |distance| lower bound
    std::vector<double> travel_;
};

// External forces P_ext = P_cc + P_cw(P_int + P_cc) for inserted nodes.
// `carried` must hold the internal forces; the coil-coil part is added into
// it before the wall force is evaluated. Self contacts skip edges within
// `exclusion` edges of the node along the rod.
std::vector<Vec3> contact_forces(const RodState& state, const TriBvh& wall,
                                 const ContactParams& params,
                                 const std::vector<Vec3>& internal,
                                 WallDistanceCache* cache = nullptr, int exclusion = -1);

// Default exclusion window: edges closer than 1.5 D2 along the rod.
int default_exclusion(const RodState& state, const ContactParams& params);

}  // namespace vasc
