#include "vasctk/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vasc {

namespace {

std::string lowercase_ext(const std::string& path) {
    auto pos = path.find_last_of('.');
    std::string ext = (pos == std::string::npos) ? "" : path.substr(pos + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

void push_triangle(TriMesh& mesh, const Vec3& a, const Vec3& b, const Vec3& c) {
    int base = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(a);
    mesh.vertices.push_back(b);
    mesh.vertices.push_back(c);
    mesh.triangles.push_back({base, base + 1, base + 2});
}

TriMesh read_stl_binary(std::ifstream& in) {
    char header[80];
    in.read(header, 80);
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 4);
    if (!in) throw std::runtime_error("STL: truncated binary header");

    TriMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(count) * 3);
    mesh.triangles.reserve(count);
    for (std::uint32_t t = 0; t < count; ++t) {
        float data[12];
        std::uint16_t attr;
        in.read(reinterpret_cast<char*>(data), sizeof(data));
        in.read(reinterpret_cast<char*>(&attr), 2);
        if (!in) throw std::runtime_error("STL: truncated binary facet data");
        // data[0..2] is the facet normal, recomputed from vertices instead.
        push_triangle(mesh, {data[3], data[4], data[5]}, {data[6], data[7], data[8]},
                      {data[9], data[10], data[11]});
    }
    return mesh;
}

TriMesh read_stl_ascii(std::ifstream& in) {
    TriMesh mesh;
    std::string tok;
    std::vector<Vec3> verts;
    while (in >> tok) {
        if (tok == "vertex") {
            Vec3 v;
            if (!(in >> v.x >> v.y >> v.z)) throw std::runtime_error("STL: malformed vertex");
            verts.push_back(v);
        } else if (tok == "endfacet") {
            if (verts.size() != 3) throw std::runtime_error("STL: facet without 3 vertices");
            push_triangle(mesh, verts[0], verts[1], verts[2]);
            verts.clear();
        }
    }
    return mesh;
}

}  // namespace

TriMesh read_stl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open STL file: " + path);

    // An ASCII STL starts with "solid" and contains "facet" soon after; a
    // binary file may also start with "solid", so check the size heuristic.
    char head[6] = {};
    in.read(head, 5);
    in.seekg(0, std::ios::end);
    auto file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0, std::ios::beg);

    bool ascii = std::strncmp(head, "solid", 5) == 0;
    if (ascii && file_size >= 84) {
        // Confirm via the binary triangle-count consistency test.
        in.seekg(80, std::ios::beg);
        std::uint32_t count = 0;
        in.read(reinterpret_cast<char*>(&count), 4);
        in.seekg(0, std::ios::beg);
        if (file_size == 84ull + 50ull * count) ascii = false;
    }
    return ascii ? read_stl_ascii(in) : read_stl_binary(in);
}

TriMesh read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open OBJ file: " + path);
    TriMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x >> v.y >> v.z;
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string f;
            while (ls >> f) {
                // "i", "i/t", "i/t/n" forms; negative indices are relative.
                int v = std::stoi(f.substr(0, f.find('/')));
                if (v < 0) v = static_cast<int>(mesh.vertices.size()) + v + 1;
                idx.push_back(v - 1);
            }
            for (std::size_t k = 2; k < idx.size(); ++k)  // fan-triangulate
                mesh.triangles.push_back({idx[0], idx[k - 1], idx[k]});
        }
    }
    return mesh;
}

TriMesh load_mesh(const std::string& path, const MeshLoadOptions& opts) {
    const std::string ext = lowercase_ext(path);
    TriMesh mesh;
    if (ext == "stl")
        mesh = read_stl(path);
    else if (ext == "obj")
        mesh = read_obj(path);
    else
        throw std::runtime_error("unsupported mesh format: " + path);

    if (opts.weld_eps > 0.0) weld_vertices(mesh, opts.weld_eps);
    mesh.validate_indices();
    mesh.update_cache();
    if (opts.repair_orientation) repair_orientation(mesh);
    return mesh;
}

void write_stl_binary(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write STL file: " + path);
    char header[80] = {};
    std::snprintf(header, sizeof(header), "vasctk binary stl");
    out.write(header, 80);
    auto count = static_cast<std::uint32_t>(mesh.triangles.size());
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec3 v1 = mesh.tri_vertex(static_cast<int>(t), 0);
        const Vec3 v2 = mesh.tri_vertex(static_cast<int>(t), 1);
        const Vec3 v3 = mesh.tri_vertex(static_cast<int>(t), 2);
        Vec3 n = cross(v2 - v1, v3 - v1);
        double len = norm(n);
        if (len > 0.0) n = n / len;
        float data[12] = {
            static_cast<float>(n.x),  static_cast<float>(n.y),  static_cast<float>(n.z),
            static_cast<float>(v1.x), static_cast<float>(v1.y), static_cast<float>(v1.z),
            static_cast<float>(v2.x), static_cast<float>(v2.y), static_cast<float>(v2.z),
            static_cast<float>(v3.x), static_cast<float>(v3.y), static_cast<float>(v3.z)};
        std::uint16_t attr = 0;
        out.write(reinterpret_cast<const char*>(data), sizeof(data));
        out.write(reinterpret_cast<const char*>(&attr), 2);
    }
}

void write_stl_ascii(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write STL file: " + path);
    out.precision(17);
    out << "solid vasctk\n";
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec3 v1 = mesh.tri_vertex(static_cast<int>(t), 0);
        const Vec3 v2 = mesh.tri_vertex(static_cast<int>(t), 1);
        const Vec3 v3 = mesh.tri_vertex(static_cast<int>(t), 2);
        Vec3 n = cross(v2 - v1, v3 - v1);
        double len = norm(n);
        if (len > 0.0) n = n / len;
        out << " facet normal " << n.x << " " << n.y << " " << n.z << "\n  outer loop\n";
        out << "   vertex " << v1.x << " " << v1.y << " " << v1.z << "\n";
        out << "   vertex " << v2.x << " " << v2.y << " " << v2.z << "\n";
        out << "   vertex " << v3.x << " " << v3.y << " " << v3.z << "\n";
        out << "  endloop\n endfacet\n";
    }
    out << "endsolid vasctk\n";
}

void read_patch_csv(TriMesh& mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open patch CSV: " + path);
    mesh.patch.assign(mesh.triangles.size(), -1);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("patch CSV: missing comma at line " + std::to_string(lineno));
        int tri = std::stoi(line.substr(0, comma));
        std::string label = line.substr(comma + 1);
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
        if (tri < 0 || tri >= static_cast<int>(mesh.triangles.size()))
            throw std::runtime_error("patch CSV: triangle id out of range at line " +
                                     std::to_string(lineno));
        mesh.patch[tri] = mesh.add_patch(label);
    }
}

void write_patch_csv(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write patch CSV: " + path);
    for (std::size_t t = 0; t < mesh.patch.size(); ++t)
        if (mesh.patch[t] >= 0) out << t << "," << mesh.patch_names[mesh.patch[t]] << "\n";
}

}  // namespace vasc
