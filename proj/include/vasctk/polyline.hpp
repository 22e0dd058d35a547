#pragma once
// Discrete centerlines: points with inscribed-sphere radii, arc lengths and
// twist-free parallel-transported frames.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vasctk/vec3.hpp"

namespace vasc {

struct Frame {
    Vec3 t, u, v;  // orthonormal triad, t along the curve tangent
};

struct Polyline {
    std::vector<Vec3> points;       // mm
    std::vector<double> radii;      // inscribed-sphere radius per point, mm (may be empty)
    std::vector<double> arc;        // cumulative arc length, arc[0] = 0
    std::vector<Frame> frames;      // empty until parallel_transport_frames()

    std::size_t size() const { return points.size(); }
    double length() const { return arc.empty() ? 0.0 : arc.back(); }
    bool has_radii() const { return radii.size() == points.size(); }
    bool has_frames() const { return frames.size() == points.size(); }

    void recompute_arc();           // chord-length arc parameterization

    // Linear interpolation in arc length.
    Vec3 point_at(double s) const;
    double radius_at(double s) const;
    Frame frame_at(double s) const;  // components interpolated, then re-orthonormalized
};

Polyline make_polyline(std::vector<Vec3> points, std::vector<double> radii = {});

// CSV rows x,y,z[,r] in mm ordered along the vessel.
Polyline read_centerline_csv(const std::string& path);
void write_centerline_csv(const Polyline& line, const std::string& path);
// Debug export: x,y,z,tx,ty,tz,ux,uy,uz,vx,vy,vz
void write_frames_csv(const Polyline& line, const std::string& path);

// Sub-curve on [tau_s, tau_e] with endpoints (and radii) interpolated
// linearly on the containing segments, re-parameterized to [0, tau_e-tau_s].
Polyline truncate(const Polyline& line, double tau_s, double tau_e);

struct CurveSmoothParams {
    int iterations = 512;   // total passes; even ones add lambda*delta, odd subtract mu*delta
    double lambda = 0.5;
    double mu = 0.25;
};

// One-dimensional Taubin smoother over interior points (endpoints fixed);
// arc lengths are recomputed afterwards.
Polyline taubin_smooth_curve(const Polyline& line, const CurveSmoothParams& params = {});

// Length-aware averaged tangents; unit length.
std::vector<Vec3> tangents(const Polyline& line);

struct FrameSeed {
    std::optional<Vec3> u1;          // must be orthogonal to t1 within 1e-6 if given
    std::uint64_t seed = 0x5eed5eedULL;  // RNG seed when u1 is generated
};

// Twist-free transport of an initial orthonormal frame along the curve.
// Throws on antiparallel consecutive tangents.
Polyline parallel_transport_frames(const Polyline& line, const FrameSeed& seed = {});

}  // namespace vasc
