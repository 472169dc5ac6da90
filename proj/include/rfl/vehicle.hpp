#pragma once

#include <array>

#include "rfl/config.hpp"
#include "rfl/mat3.hpp"
#include "rfl/so3.hpp"
#include "rfl/vec3.hpp"

namespace rfl {

using Rotor4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// Total rotor force along body z plus body torque.
struct Wrench {
    double f = 0.0; // N
    Vec3 tau;       // N*m
};

struct VehicleParams {
    double mass = 0.0347;                                   // kg
    Mat3 inertia = Mat3::diag(16.6e-6, 16.6e-6, 29.3e-6);   // kg*m^2
    double kappa_f = 2.2e-8;                                // N/(rad/s)^2
    double arm = 0.046;                                     // m
    double kappa_tau_over_f = 0.006;                        // m, yaw torque per thrust
    double rotor_speed_min = 0.0;                           // rad/s
    double rotor_speed_max = 2600.0;                        // rad/s
    double motor_tau = 0.030;                               // s, first-order lag
    double gravity = 9.81;                                  // m/s^2

    // Actuation matrix: (f_1..f_4)^T = b0 * (f_u, tau_x, tau_y, tau_z)^T.
    Mat4 b0{};
    Mat4 b0_inv{};

    VehicleParams();
    static VehicleParams from_config(const Config& cfg);

    void rebuild_mixing(); // recompute b0/b0_inv from arm and kappa_tau_over_f
    void set_b0(const Mat4& b0_new);

    double hover_rotor_speed(double supported_mass) const;
    double max_rotor_force() const { return kappa_f * rotor_speed_max * rotor_speed_max; }
};

struct VehicleState {
    Vec3 p;                     // m, world
    Vec3 v;                     // m/s, world
    Mat3 R = Mat3::identity();  // body -> world
    Vec3 omega;                 // rad/s, body

    bool finite() const { return is_finite(p) && is_finite(v) && is_finite(R) && is_finite(omega); }
};

struct PayloadParams {
    double mass = 0.005;     // kg
    double cable_length = 0.5; // m

    static PayloadParams from_config(const Config& cfg);
};

struct PayloadState {
    Vec3 p;        // m
    Vec3 v;        // m/s
    Vec3 q{0, 0, -1}; // unit cable direction, UAV -> payload
    double tension = 0.0; // N

    bool finite() const { return is_finite(p) && is_finite(v) && is_finite(q) && std::isfinite(tension); }
};

// f_i = kappa_f * rpm_i^2
Rotor4 motor_forces(const Rotor4& rotor_speeds, const VehicleParams& params);

// Applies b0^-1 to per-rotor forces.
Wrench wrench_from_rotor_forces(const Rotor4& forces, const VehicleParams& params);

// Applies b0 to a wrench (no clamping).
Rotor4 rotor_forces_from_wrench(const Wrench& w, const VehicleParams& params);

Mat4 mat4_inverse(const Mat4& a); // throws std::invalid_argument if singular

} // namespace rfl
