#pragma once
// Taubin smoothing of triangulated surfaces: alternating lambda/mu umbrella
// steps over vertex 1-rings. Connectivity is left untouched.

#include "vasctk/trimesh.hpp"

namespace vasc {

struct TaubinParams {
    double lambda = 0.5;
    double mu = -0.53;
    int iterations = 10;  // number of lambda+mu pairs
};

TriMesh taubin_smooth_surface(const TriMesh& mesh, const TaubinParams& params = {});

}  // namespace vasc
