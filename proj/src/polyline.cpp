#include "vasctk/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vasctk/rotation.hpp"

namespace vasc {

void Polyline::recompute_arc() {
    arc.resize(points.size());
    if (points.empty()) return;
    arc[0] = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        arc[i] = arc[i - 1] + norm(points[i] - points[i - 1]);
}

namespace {

// Containing segment index k with arc[k] <= s <= arc[k+1], plus local weight.
std::pair<std::size_t, double> locate(const std::vector<double>& arc, double s) {
    if (arc.size() < 2) return {0, 0.0};
    auto it = std::upper_bound(arc.begin(), arc.end(), s);
    std::size_t k = (it == arc.begin()) ? 0 : static_cast<std::size_t>(it - arc.begin()) - 1;
    k = std::min(k, arc.size() - 2);
    const double seg = arc[k + 1] - arc[k];
    const double w = seg > 0.0 ? std::clamp((s - arc[k]) / seg, 0.0, 1.0) : 0.0;
    return {k, w};
}

}  // namespace

Vec3 Polyline::point_at(double s) const {
    auto [k, w] = locate(arc, s);
    return points[k] * (1.0 - w) + points[k + 1] * w;
}

double Polyline::radius_at(double s) const {
    if (!has_radii()) throw std::logic_error("Polyline::radius_at: no radii");
    auto [k, w] = locate(arc, s);
    return radii[k] * (1.0 - w) + radii[k + 1] * w;
}

Frame Polyline::frame_at(double s) const {
    if (!has_frames()) throw std::logic_error("Polyline::frame_at: no frames");
    auto [k, w] = locate(arc, s);
    Frame f;
    f.t = normalized(frames[k].t * (1.0 - w) + frames[k + 1].t * w);
    Vec3 u = frames[k].u * (1.0 - w) + frames[k + 1].u * w;
    u -= f.t * dot(u, f.t);
    f.u = normalized(u);
    f.v = cross(f.t, f.u);
    return f;
}

Polyline make_polyline(std::vector<Vec3> points, std::vector<double> radii) {
    if (!radii.empty() && radii.size() != points.size())
        throw std::invalid_argument("make_polyline: radii size mismatch");
    for (double r : radii)
        if (r <= 0.0) throw std::invalid_argument("make_polyline: radii must be positive");
    Polyline line;
    line.points = std::move(points);
    line.radii = std::move(radii);
    line.recompute_arc();
    return line;
}

Polyline read_centerline_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open centerline CSV: " + path);
    std::vector<Vec3> pts;
    std::vector<double> radii;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        Vec3 p;
        double r;
        if (!(ls >> p.x >> p.y >> p.z)) continue;  // header line
        pts.push_back(p);
        if (ls >> r) radii.push_back(r);
    }
    if (!radii.empty() && radii.size() != pts.size())
        throw std::runtime_error("centerline CSV: radius column incomplete: " + path);
    return make_polyline(std::move(pts), std::move(radii));
}

void write_centerline_csv(const Polyline& line, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write centerline CSV: " + path);
    out.precision(17);
    for (std::size_t i = 0; i < line.points.size(); ++i) {
        out << line.points[i].x << "," << line.points[i].y << "," << line.points[i].z;
        if (line.has_radii()) out << "," << line.radii[i];
        out << "\n";
    }
}

void write_frames_csv(const Polyline& line, const std::string& path) {
    if (!line.has_frames()) throw std::logic_error("write_frames_csv: no frames");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write frames CSV: " + path);
    out.precision(17);
    for (std::size_t i = 0; i < line.points.size(); ++i) {
        const Vec3& p = line.points[i];
        const Frame& f = line.frames[i];
        out << p.x << "," << p.y << "," << p.z << "," << f.t.x << "," << f.t.y << "," << f.t.z
            << "," << f.u.x << "," << f.u.y << "," << f.u.z << "," << f.v.x << "," << f.v.y << ","
            << f.v.z << "\n";
    }
}

Polyline truncate(const Polyline& line, double tau_s, double tau_e) {
    if (line.size() < 2) throw std::invalid_argument("truncate: need at least 2 points");
    const double L = line.length();
    if (!(0.0 <= tau_s && tau_s < tau_e && tau_e <= L))
        throw std::invalid_argument("truncate: require 0 <= tau_s < tau_e <= L");

    constexpr double tie_eps = 1e-12;
    std::vector<Vec3> pts;
    std::vector<double> radii;
    auto push = [&](double s) {
        pts.push_back(line.point_at(s));
        if (line.has_radii()) radii.push_back(line.radius_at(s));
    };
    push(tau_s);
    for (std::size_t i = 0; i < line.size(); ++i) {
        const double s = line.arc[i];
        if (s > tau_s + tie_eps && s < tau_e - tie_eps) push(s);
    }
    push(tau_e);
    return make_polyline(std::move(pts), std::move(radii));
}

Polyline taubin_smooth_curve(const Polyline& line, const CurveSmoothParams& params) {
    const std::size_t n = line.size();
    if (n < 3) throw std::invalid_argument("taubin_smooth_curve: need at least 3 points");

    Polyline out = line;
    std::vector<Vec3> delta(n);
    for (int k = 0; k < params.iterations; ++k) {
        for (std::size_t i = 1; i + 1 < n; ++i)
            delta[i] = 0.5 * (out.points[i + 1] - 2.0 * out.points[i] + out.points[i - 1]);
        if (k % 2 == 0) {
            for (std::size_t i = 1; i + 1 < n; ++i) out.points[i] += params.lambda * delta[i];
        } else {
            for (std::size_t i = 1; i + 1 < n; ++i) out.points[i] -= params.mu * delta[i];
        }
    }
    out.recompute_arc();
    out.frames.clear();
    return out;
}

std::vector<Vec3> tangents(const Polyline& line) {
    const std::size_t n = line.size();
    if (n < 2) throw std::invalid_argument("tangents: need at least 2 points");
    for (std::size_t i = 1; i < n; ++i)
        if (norm2(line.points[i] - line.points[i - 1]) == 0.0)
            throw std::invalid_argument("tangents: coincident consecutive points");

    std::vector<Vec3> t(n);
    t[0] = normalized(line.points[1] - line.points[0]);
    t[n - 1] = normalized(line.points[n - 1] - line.points[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec3 d = line.points[i + 1] - line.points[i - 1];
        if (norm2(d) == 0.0)
            throw std::invalid_argument("tangents: degenerate interior point (folded curve)");
        const double w = norm(line.points[i + 1] - line.points[i]) +
                         norm(line.points[i] - line.points[i - 1]);
        t[i] = normalized(d / w);
    }
    return t;
}

Polyline parallel_transport_frames(const Polyline& line, const FrameSeed& seed) {
    const auto tan = tangents(line);
    const std::size_t n = line.size();

    Vec3 u1;
    if (seed.u1) {
        u1 = *seed.u1;
        if (std::abs(norm(u1) - 1.0) > 1e-6 || std::abs(dot(u1, tan[0])) > 1e-6)
            throw std::invalid_argument(
                "parallel_transport_frames: u1 must be a unit vector orthogonal to t1");
        u1 -= tan[0] * dot(u1, tan[0]);
        u1 = normalized(u1);
    } else {
        std::mt19937_64 rng(seed.seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        do {
            u1 = Vec3{dist(rng), dist(rng), dist(rng)};
            u1 -= tan[0] * dot(u1, tan[0]);
        } while (norm(u1) < 1e-3);
        u1 = normalized(u1);
    }

    Polyline out = line;
    out.frames.resize(n);
    out.frames[0] = Frame{tan[0], u1, cross(tan[0], u1)};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (dot(tan[i], tan[i + 1]) <= -1.0 + 1e-12)
            throw std::invalid_argument(
                "parallel_transport_frames: antiparallel consecutive tangents, refine or smooth "
                "the curve first");
        const Mat3 R = rotation_between(tan[i], tan[i + 1]);
        Frame f;
        f.t = tan[i + 1];
        f.u = R * out.frames[i].u;
        f.v = R * out.frames[i].v;
        out.frames[i + 1] = f;
    }
    return out;
}

}  // namespace vasc
