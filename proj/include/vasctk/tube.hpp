#pragma once
// Inflation of center curves into watertight tube meshes with hemispherical
// end caps (rings built on the curve's parallel-transported frames).

#include "vasctk/polyline.hpp"
#include "vasctk/trimesh.hpp"

namespace vasc {

// `path` is treated as closed (ring-stitched, no caps) when its endpoints
// coincide within 1e-9 mm. Self-intersection at scale r_t is the caller's
// responsibility.
TriMesh inflate_tube(const Polyline& path, double tube_radius, int sides = 16);

}  // namespace vasc
