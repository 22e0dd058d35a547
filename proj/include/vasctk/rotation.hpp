#pragma once
// Rigid transforms and the finite rotation formula used for inlet alignment
// and frame transport.

#include <stdexcept>

#include "vasctk/vec3.hpp"

namespace vasc {

struct RigidTransform {
    Mat3 rotation = Mat3::identity();
    Vec3 translation{};  // mm

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    // Composition: result maps x to this(other(x)).
    RigidTransform after(const RigidTransform& other) const {
        RigidTransform r;
        r.rotation = rotation * other.rotation;
        r.translation = rotation * other.translation + translation;
        return r;
    }
};

// Rotation matrix mapping unit vector a onto unit vector b.
//
// Uses the finite rotation formula in the division-free form
//   R = I + [w]x + [w]x^2 / (1 + c),   w = a x b,  c = <a,b>,
// which is well conditioned all the way down to zero angle. The antipodal
// case c = -1 returns -I (a point reflection, det -1), matching the stated
// special case; callers that need a proper rotation must treat it themselves.
inline Mat3 rotation_between(const Vec3& a, const Vec3& b) {
    constexpr double unit_tol = 1e-9;
    if (std::abs(norm(a) - 1.0) > unit_tol || std::abs(norm(b) - 1.0) > unit_tol)
        throw std::invalid_argument("rotation_between: inputs must be unit vectors");

    double c = dot(a, b);
    if (c <= -1.0 + 1e-12) {
        return Mat3::identity() * -1.0;
    }
    Vec3 w = cross(a, b);
    Mat3 wx = cross_matrix(w);
    return Mat3::identity() + wx + (wx * wx) * (1.0 / (1.0 + c));
}

}  // namespace vasc
