#include "vasctk/stent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vasc {

void StentDesign::validate() const {
    if (thread_radius <= 0.0) throw std::invalid_argument("StentDesign: r_t must be positive");
    if (arc_length <= 0.0) throw std::invalid_argument("StentDesign: arc length must be positive");
    if (windings < 1 || thread_pairs < 1)
        throw std::invalid_argument("StentDesign: n_w and n_t must be >= 1");
}

std::vector<Polyline> stent_reference_threads(const StentDesign& design, int samples_per_thread) {
    design.validate();
    if (samples_per_thread < 2)
        throw std::invalid_argument("stent_reference_threads: need at least 2 samples");

    std::vector<Polyline> threads;
    threads.reserve(2 * design.thread_pairs);
    const int n = samples_per_thread;
    for (int i = 1; i <= design.thread_pairs; ++i) {
        const double phase = 2.0 * M_PI * (i - 1) / design.thread_pairs;
        for (int dir = 0; dir < 2; ++dir) {
            const double sign = dir == 0 ? -1.0 : 1.0;
            std::vector<Vec3> pts(n);
            for (int k = 0; k < n; ++k) {
                const double theta = static_cast<double>(k) / (n - 1);
                const double ang = sign * 2.0 * M_PI * design.windings * theta + phase;
                pts[k] = {std::cos(ang), std::sin(ang), design.arc_length * theta};
            }
            threads.push_back(make_polyline(std::move(pts)));
        }
    }
    return threads;
}

std::vector<Polyline> gen_stent_threads(const StentDesign& design, const Polyline& line,
                                        int samples_per_thread) {
    design.validate();
    if (!line.has_frames())
        throw std::invalid_argument("gen_stent_threads: centerline frames missing");
    if (!line.has_radii())
        throw std::invalid_argument("gen_stent_threads: centerline radii missing");
    if (std::abs(line.length() - design.arc_length) > 1e-6)
        throw std::invalid_argument(
            "gen_stent_threads: centerline arc length does not match the design h_dmax");

    double r_min = 1e300;
    for (double r : line.radii) r_min = std::min(r_min, r);

    auto reference = stent_reference_threads(design, samples_per_thread);
    for (Polyline& thread : reference) {
        for (Vec3& p : thread.points) {
            const double gx = p.x, gy = p.y, gz = p.z;  // reference components
            const Vec3 k = line.point_at(gz);
            const Frame f = line.frame_at(gz);
            const double rd = design.radius_mode == StentRadiusMode::constant_min_gauge
                                  ? r_min
                                  : line.radius_at(gz);
            p = k + rd * (gx * f.u + gy * f.v);
        }
        thread.recompute_arc();
    }
    return reference;
}

}  // namespace vasc
