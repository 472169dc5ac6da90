#include "rfl/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace rfl {

Mat4 mat4_inverse(const Mat4& a) {
    // Gauss-Jordan with partial pivoting.
    double aug[4][8];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) aug[i][j] = a[i][j];
        for (int j = 0; j < 4; ++j) aug[i][4 + j] = (i == j) ? 1.0 : 0.0;
    }
    for (int c = 0; c < 4; ++c) {
        int pivot = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::fabs(aug[r][c]) > std::fabs(aug[pivot][c])) pivot = r;
        if (std::fabs(aug[pivot][c]) < 1e-14)
            throw std::invalid_argument("mat4_inverse: singular matrix");
        if (pivot != c)
            for (int j = 0; j < 8; ++j) std::swap(aug[pivot][j], aug[c][j]);
        const double inv_p = 1.0 / aug[c][c];
        for (int j = 0; j < 8; ++j) aug[c][j] *= inv_p;
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            const double f = aug[r][c];
            for (int j = 0; j < 8; ++j) aug[r][j] -= f * aug[c][j];
        }
    }
    Mat4 inv{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) inv[i][j] = aug[i][4 + j];
    return inv;
}

VehicleParams::VehicleParams() { rebuild_mixing(); }

void VehicleParams::rebuild_mixing() {
    // X configuration. Rotor bearings (x fwd, y left), alternating spin:
    //   0: (+d,+d) cw   1: (-d,+d) ccw   2: (-d,-d) cw   3: (+d,-d) ccw
    const double d = arm / std::sqrt(2.0);
    const double g = kappa_tau_over_f;
    // Rows map per-rotor forces to (f_u, tau_x, tau_y, tau_z).
    const Mat4 forces_to_wrench = {{{1, 1, 1, 1},
                                    {d, d, -d, -d},
                                    {-d, d, d, -d},
                                    {-g, g, -g, g}}};
    b0 = mat4_inverse(forces_to_wrench);
    b0_inv = forces_to_wrench;
}

void VehicleParams::set_b0(const Mat4& b0_new) {
    b0 = b0_new;
    b0_inv = mat4_inverse(b0_new);
}

double VehicleParams::hover_rotor_speed(double supported_mass) const {
    return std::sqrt(supported_mass * gravity / (4.0 * kappa_f));
}

VehicleParams VehicleParams::from_config(const Config& cfg) {
    VehicleParams p;
    p.mass = cfg.get_double("vehicle.mass", p.mass);
    const Vec3 jd = cfg.get_vec3("vehicle.inertia_diag", {16.6e-6, 16.6e-6, 29.3e-6});
    p.inertia = Mat3::diag(jd);
    p.kappa_f = cfg.get_double("vehicle.kappa_f", p.kappa_f);
    p.arm = cfg.get_double("vehicle.arm", p.arm);
    p.kappa_tau_over_f = cfg.get_double("vehicle.kappa_tau_over_f", p.kappa_tau_over_f);
    p.rotor_speed_min = cfg.get_double("vehicle.rotor_speed_min", p.rotor_speed_min);
    p.rotor_speed_max = cfg.get_double("vehicle.rotor_speed_max", p.rotor_speed_max);
    p.motor_tau = cfg.get_double("vehicle.motor_tau", p.motor_tau);
    p.gravity = cfg.get_double("vehicle.gravity", p.gravity);
    if (p.mass <= 0.0 || p.kappa_f <= 0.0)
        throw std::runtime_error("vehicle config: mass and kappa_f must be positive");
    if (jd.x <= 0.0 || jd.y <= 0.0 || jd.z <= 0.0)
        throw std::runtime_error("vehicle config: inertia diagonal must be positive");
    p.rebuild_mixing();
    if (cfg.has("vehicle.b0")) {
        const auto flat = cfg.get_list("vehicle.b0");
        if (flat.size() != 16)
            throw std::runtime_error("vehicle config: b0 override needs 16 values");
        Mat4 b0{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) b0[i][j] = flat[4 * i + j];
        p.set_b0(b0);
    }
    return p;
}

PayloadParams PayloadParams::from_config(const Config& cfg) {
    PayloadParams p;
    p.mass = cfg.get_double("payload.mass", p.mass);
    p.cable_length = cfg.get_double("payload.cable_length", p.cable_length);
    if (p.mass <= 0.0 || p.cable_length <= 0.0)
        throw std::runtime_error("payload config: mass and cable_length must be positive");
    return p;
}

Rotor4 motor_forces(const Rotor4& rotor_speeds, const VehicleParams& params) {
    Rotor4 f{};
    for (int i = 0; i < 4; ++i) f[i] = params.kappa_f * rotor_speeds[i] * rotor_speeds[i];
    return f;
}

Wrench wrench_from_rotor_forces(const Rotor4& forces, const VehicleParams& params) {
    const auto& a = params.b0_inv;
    double w[4];
    for (int i = 0; i < 4; ++i)
        w[i] = a[i][0] * forces[0] + a[i][1] * forces[1] + a[i][2] * forces[2] + a[i][3] * forces[3];
    return {w[0], {w[1], w[2], w[3]}};
}

Rotor4 rotor_forces_from_wrench(const Wrench& w, const VehicleParams& params) {
    const auto& b = params.b0;
    const double in[4] = {w.f, w.tau.x, w.tau.y, w.tau.z};
    Rotor4 f{};
    for (int i = 0; i < 4; ++i)
        f[i] = b[i][0] * in[0] + b[i][1] * in[1] + b[i][2] * in[2] + b[i][3] * in[3];
    return f;
}

} // namespace rfl
