#pragma once
// STL (binary + ASCII) read/write, OBJ read, and patch-label sidecar CSV.
// STL carries no connectivity; loaders weld vertices within 1e-6 mm so the
// closedness checks and volume formulas see shared edges.

#include <string>

#include "vasctk/trimesh.hpp"

namespace vasc {

struct MeshLoadOptions {
    double weld_eps = 1e-6;       // mm; <= 0 disables welding
    bool repair_orientation = true;
};

TriMesh load_mesh(const std::string& path, const MeshLoadOptions& opts = {});

TriMesh read_stl(const std::string& path);   // auto-detects binary vs ASCII
TriMesh read_obj(const std::string& path);

void write_stl_binary(const TriMesh& mesh, const std::string& path);
void write_stl_ascii(const TriMesh& mesh, const std::string& path);

// Sidecar CSV rows: triangle_id,label
void read_patch_csv(TriMesh& mesh, const std::string& path);
void write_patch_csv(const TriMesh& mesh, const std::string& path);

}  // namespace vasc
