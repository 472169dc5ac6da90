#pragma once

#include "rfl/mat3.hpp"
#include "rfl/vec3.hpp"

namespace rfl {

// Skew-symmetric matrix S with S u = v x u.
Mat3 hat(const Vec3& v);

// Inverse of hat. Throws std::invalid_argument if m is not skew-symmetric
// within tolerance 1e-9 (max-abs of m + m^T).
Vec3 vee(const Mat3& m);

// Nearest rotation matrix (polar projection). The input must be within 0.1 of
// SO(3) in Frobenius norm; throws std::domain_error otherwise.
Mat3 orthonormalize(const Mat3& r);

// Rodrigues formula, exp(hat(v)).
Mat3 so3_exp(const Vec3& v);

Mat3 rot_z(double angle);

} // namespace rfl
