#include "vasctk/web.hpp"

#include <cmath>
#include <stdexcept>

namespace vasc {

void WebDesign::validate() const {
    if (thread_radius <= 0.0 || max_radius <= 0.0 || height <= 0.0)
        throw std::invalid_argument("WebDesign: radii and height must be positive");
    if (thread_radius >= max_radius)
        throw std::invalid_argument("WebDesign: thread radius must be below the device radius");
    if (windings < 1 || thread_pairs < 1 || boxiness < 1)
        throw std::invalid_argument("WebDesign: n_w, n_t and b must be positive integers");
    if (tip_length < 0.0 || tip_length > 0.5 || tip_width < 0.0 || tip_width > 0.5)
        throw std::invalid_argument("WebDesign: tip parameters must lie in [0, 1/2]");
}

double web_mollifier(double theta, double w) {
    if (theta <= 0.0 || theta >= 1.0) return 0.0;
    if (w <= 0.0) return 1.0;
    auto flank = [](double s) {
        // exp(1 - (1 - s^2)^-1), s in [-1, 0]; IEEE gives exp(-inf) = 0 at s = -1.
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
    };
    if (theta <= w) return flank((theta - w) / w);
    if (theta < 1.0 - w) return 1.0;
    return flank((theta - (1.0 - w)) / w);
}

WebShape web_shape_functions(double theta, const WebDesign& design) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("web_shape_functions: theta must lie in [0, 1]");
    WebShape s;
    const double c = 2.0 * theta - 1.0;
    s.r = 1.0 - c * c;
    const double body = 0.5 * std::tanh(design.boxiness * (theta - 0.5)) + 0.5;
    const double sg = (c > 0.0) - (c < 0.0);
    const double tip = design.tip_length * sg * (web_mollifier(theta, design.tip_width) - 1.0);
    s.z = body + tip;
    return s;
}

std::vector<Polyline> gen_web_threads(const WebDesign& design, int samples_per_thread) {
    design.validate();
    if (samples_per_thread < 2 * design.windings * 8)
        throw std::invalid_argument("gen_web_threads: need at least 8 samples per winding");

    std::vector<Polyline> threads;
    threads.reserve(2 * design.thread_pairs);
    const int n = samples_per_thread;
    for (int i = 1; i <= design.thread_pairs; ++i) {
        const double phase = 2.0 * M_PI * (i - 1) / design.thread_pairs;
        for (int dir = 0; dir < 2; ++dir) {
            const double sign = dir == 0 ? -1.0 : 1.0;  // clockwise first
            std::vector<Vec3> pts(n);
            for (int k = 0; k < n; ++k) {
                const double theta = static_cast<double>(k) / (n - 1);
                const WebShape s = web_shape_functions(theta, design);
                const double ang = sign * 2.0 * M_PI * design.windings * theta + phase;
                pts[k] = {design.max_radius * s.r * std::cos(ang),
                          design.max_radius * s.r * std::sin(ang), design.height * s.z};
            }
            threads.push_back(make_polyline(std::move(pts)));
        }
    }
    return threads;
}

std::vector<Polyline> web_marker_paths(const WebDesign& design) {
    design.validate();
    std::vector<Polyline> out;
    if (!design.markers) return out;
    const double len = 4.0 * design.thread_radius;
    const double z_lo = design.height * web_shape_functions(0.0, design).z;
    const double z_hi = design.height * web_shape_functions(1.0, design).z;
    out.push_back(make_polyline({Vec3{0, 0, z_lo}, Vec3{0, 0, z_lo - len}}));
    out.push_back(make_polyline({Vec3{0, 0, z_hi}, Vec3{0, 0, z_hi + len}}));
    return out;
}

}  // namespace vasc
