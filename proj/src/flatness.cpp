#include <cmath>
#include <stdexcept>

#include "rfl/so3.hpp"
#include "rfl/trajectory.hpp"

namespace rfl {

namespace {

// Vector-valued function of time carried with its first two derivatives.
struct D2 {
    Vec3 v, d, dd;
};

D2 d2_cross(const D2& a, const D2& b) {
    return {cross(a.v, b.v),
            cross(a.d, b.v) + cross(a.v, b.d),
            cross(a.dd, b.v) + 2.0 * cross(a.d, b.d) + cross(a.v, b.dd)};
}

D2 d2_normalize(const D2& a) {
    const double n = norm(a.v);
    const double nd = dot(a.v, a.d) / n;
    const double ndd = (dot(a.d, a.d) + dot(a.v, a.dd) - nd * nd) / n;
    D2 u;
    u.v = a.v / n;
    u.d = a.d / n - a.v * (nd / (n * n));
    u.dd = a.dd / n - a.d * (2.0 * nd / (n * n)) + a.v * (2.0 * nd * nd / (n * n * n) - ndd / (n * n));
    return u;
}

Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z};
}

Vec3 vee_skew_part(const Mat3& m) {
    const Mat3 s = 0.5 * (m - transpose(m));
    return {s(2, 1), s(0, 2), s(1, 0)};
}

} // namespace

FullReference flat_expand(const FlatSample& fs, double gravity) {
    FullReference ref;
    ref.p = fs.p;
    ref.v = fs.v;
    ref.a = fs.a;

    // Thrust direction for the nominal model: along pddot + g e_z.
    const D2 acc{fs.a + gravity * kEz, fs.j, fs.s};
    if (norm(acc.v) < 1e-6)
        throw std::domain_error("flat_expand: free-fall reference (thrust direction undefined)");
    const D2 z_b = d2_normalize(acc);

    const double cy = std::cos(fs.yaw), sy = std::sin(fs.yaw);
    const D2 x_c{{cy, sy, 0.0},
                 {-sy * fs.yaw_rate, cy * fs.yaw_rate, 0.0},
                 // Yaw references are constant-rate here; curvature is ignored.
                 {0.0, 0.0, 0.0}};
    const D2 y_raw = d2_cross(z_b, x_c);
    if (norm(y_raw.v) < 1e-6)
        throw std::domain_error("flat_expand: thrust direction parallel to yaw heading");
    const D2 y_b = d2_normalize(y_raw);
    const D2 x_b = d2_cross(y_b, z_b);

    ref.R = from_columns(x_b.v, y_b.v, z_b.v);
    const Mat3 R_dot = from_columns(x_b.d, y_b.d, z_b.d);
    const Mat3 R_ddot = from_columns(x_b.dd, y_b.dd, z_b.dd);

    const Mat3 omega_hat = transpose(ref.R) * R_dot;
    ref.omega = vee_skew_part(omega_hat);
    ref.omega_dot = vee_skew_part(transpose(ref.R) * R_ddot - omega_hat * omega_hat);
    return ref;
}

FullReference flat_expand(const FlatTrajectory& traj, double t, double gravity) {
    return flat_expand(traj.sample(t), gravity);
}

} // namespace rfl
