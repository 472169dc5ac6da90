#include "rfl/so3.hpp"

#include <cmath>
#include <stdexcept>

namespace rfl {

Mat3 hat(const Vec3& v) {
    return {0.0, -v.z, v.y,
            v.z, 0.0, -v.x,
            -v.y, v.x, 0.0};
}

Vec3 vee(const Mat3& m) {
    const double skew_err = max_abs(m + transpose(m));
    if (skew_err > 1e-9)
        throw std::invalid_argument("vee: matrix is not skew-symmetric (asymmetry " +
                                    std::to_string(skew_err) + ")");
    return {m(2, 1), m(0, 2), m(1, 0)};
}

Mat3 orthonormalize(const Mat3& r) {
    if (!is_finite(r)) throw std::domain_error("orthonormalize: non-finite input");
    // Newton iteration for the polar factor, quadratic convergence near SO(3).
    Mat3 q = r;
    for (int it = 0; it < 20; ++it) {
        const double d = det(q);
        if (!(d > 0.0) || !is_finite(q))
            throw std::domain_error("orthonormalize: input too far from SO(3)");
        const Mat3 next = 0.5 * (q + transpose(inverse(q)));
        const double step = frobenius_norm(next - q);
        q = next;
        if (step < 1e-14) break;
    }
    if (frobenius_norm(q - r) > 0.1 + 1e-9)
        throw std::domain_error("orthonormalize: input too far from SO(3)");
    return q;
}

Mat3 so3_exp(const Vec3& v) {
    const double angle = norm(v);
    if (angle < 1e-12) {
        // Second-order expansion keeps small steps accurate.
        const Mat3 k = hat(v);
        return Mat3::identity() + k + 0.5 * (k * k);
    }
    const Mat3 k = hat(v / angle);
    return Mat3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

Mat3 rot_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
}

} // namespace rfl
