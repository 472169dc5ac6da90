#include "rfl/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfl/so3.hpp"

namespace rfl {

namespace {

Mat3 diag_gain(const Config& cfg, const std::string& key, const Mat3& fallback) {
    if (!cfg.has(key)) return fallback;
    const Vec3 d = cfg.get_vec3(key, {});
    if (d.x <= 0.0 || d.y <= 0.0 || d.z <= 0.0)
        throw std::runtime_error("gains: " + key + " must be positive");
    return Mat3::diag(d);
}

Mat3 attitude_setpoint(const Vec3& force, double yaw, const Mat3& fallback) {
    const double f = norm(force);
    if (f < 1e-9) return fallback;
    const Vec3 z_b = force / f;
    const Vec3 x_c{std::cos(yaw), std::sin(yaw), 0.0};
    const Vec3 y_raw = cross(z_b, x_c);
    const double ny = norm(y_raw);
    if (ny < 1e-6) return fallback;
    const Vec3 y_b = y_raw / ny;
    const Vec3 x_b = cross(y_b, z_b);
    return {x_b.x, y_b.x, z_b.x, x_b.y, y_b.y, z_b.y, x_b.z, y_b.z, z_b.z};
}

// Attitude part shared by both controllers:
//   tau_u = -KR eR - Kw ew - J w x w - J(what R^T Rd wd - R^T Rd wd_dot) - tau_a
Vec3 attitude_law(const VehicleState& state, const Mat3& R_d, const Vec3& omega_d,
                  const Vec3& omega_dot_d, const Vec3& tau_a, const GainSet& gains,
                  const VehicleParams& params) {
    const Mat3& R = state.R;
    const Vec3& w = state.omega;
    const Mat3 RtRd = transpose(R) * R_d;
    const Mat3 e_R_mat = 0.5 * (transpose(R_d) * R - RtRd);
    const Vec3 e_R{e_R_mat(2, 1), e_R_mat(0, 2), e_R_mat(1, 0)};
    const Vec3 e_w = w - RtRd * omega_d;
    const Vec3 j_w = params.inertia * w;
    return -(gains.KR * e_R) - (gains.Kw * e_w) - cross(j_w, w) -
           params.inertia * (hat(w) * (RtRd * omega_d) - RtRd * omega_dot_d) - tau_a;
}

} // namespace

GainSet GainSet::defaults(const VehicleParams& vehicle, const PayloadParams& payload) {
    GainSet g;
    const double m = vehicle.mass;
    g.Kp = Mat3::diag(12.0 * m, 12.0 * m, 12.0 * m);
    g.Kv = Mat3::diag(6.0 * m, 6.0 * m, 6.0 * m);
    g.KR = Mat3::diag(0.004, 0.004, 0.004);
    g.Kw = Mat3::diag(0.001, 0.001, 0.001);
    // Payload cascade, tuned once on the payload circle scenario.
    const double mp = payload.mass;
    g.Kpp = Mat3::diag(5.0 * mp, 5.0 * mp, 5.0 * mp);
    g.Kvp = Mat3::diag(4.0 * mp, 4.0 * mp, 4.0 * mp);
    g.Kq = Mat3::diag(36.0, 36.0, 36.0);
    g.Kqd = Mat3::diag(12.0, 12.0, 12.0);
    return g;
}

GainSet GainSet::from_config(const Config& cfg, const VehicleParams& vehicle,
                             const PayloadParams& payload) {
    GainSet g = defaults(vehicle, payload);
    g.Kp = diag_gain(cfg, "gains.kp", g.Kp);
    g.Kv = diag_gain(cfg, "gains.kv", g.Kv);
    g.KR = diag_gain(cfg, "gains.kr", g.KR);
    g.Kw = diag_gain(cfg, "gains.kw", g.Kw);
    g.Kpp = diag_gain(cfg, "gains.kpp", g.Kpp);
    g.Kvp = diag_gain(cfg, "gains.kvp", g.Kvp);
    g.Kq = diag_gain(cfg, "gains.kq", g.Kq);
    g.Kqd = diag_gain(cfg, "gains.kqd", g.Kqd);
    return g;
}

Wrench lee_control(const VehicleState& state, const FullReference& ref,
                   const ResidualFeedforward& residual, const GainSet& gains,
                   const VehicleParams& params) {
    const Vec3 e_p = state.p - ref.p;
    const Vec3 e_v = state.v - ref.v;
    const double mg = params.mass * params.gravity;

    const Vec3 f_des = -(gains.Kp * e_p) - (gains.Kv * e_v) + mg * kEz + params.mass * ref.a -
                       residual.f_a;

    Wrench w;
    w.f = dot(f_des, state.R.col(2));
    const Mat3 R_c = attitude_setpoint(f_des, 0.0, ref.R);
    w.tau = attitude_law(state, R_c, ref.omega, ref.omega_dot, residual.tau_a, gains, params);
    return w;
}

PayloadController::PayloadController(GainSet gains, VehicleParams params, PayloadParams pparams,
                                     double control_dt)
    : gains_(std::move(gains)),
      params_(std::move(params)),
      pparams_(pparams),
      dt_(control_dt) {}

void PayloadController::reset() { has_prev_ = false; }

Wrench PayloadController::control(const VehicleState& vehicle, const PayloadState& payload,
                                  const FullReference& payload_ref,
                                  const ResidualFeedforward& residual) {
    const double m = params_.mass, mp = pparams_.mass, l = pparams_.cable_length;
    const double g = params_.gravity;

    // Level 1: desired cable force on the payload.
    const Vec3 e_pp = payload.p - payload_ref.p;
    const Vec3 e_vp = payload.v - payload_ref.v;
    const Vec3 f_d = mp * (payload_ref.a + g * kEz) - (gains_.Kpp * e_pp) - (gains_.Kvp * e_vp);
    const double f_d_norm = norm(f_d);
    if (f_d_norm < 1e-6)
        throw std::domain_error("payload_control: desired cable direction undefined");
    const Vec3 q_d = -1.0 / f_d_norm * f_d;
    const Vec3 q_d_dot = has_prev_ ? (q_d - q_d_prev_) / dt_ : Vec3{};
    q_d_prev_ = q_d;
    has_prev_ = true;

    // Level 2: steer the cable direction; the UAV sits at p_p - l q.
    const Vec3 q = payload.q;
    const Vec3 q_dot = (payload.v - vehicle.v) / l;
    const Mat3 tangent = Mat3::identity() - outer(q, q);
    const Vec3 e_q = tangent * (q - q_d);
    const Vec3 e_qd = tangent * (q_dot - q_d_dot);
    const Vec3 q_ddot_cmd = -(gains_.Kq * e_q) - (gains_.Kqd * e_qd) - norm_sq(q_dot) * q;

    const Vec3 a_p_des = f_d / mp - g * kEz;
    const Vec3 a_uav_des = a_p_des - l * q_ddot_cmd;
    // No f_a compensation at levels 1-2; the cable reaction is cancelled with
    // the measured tension.
    const Vec3 f_cmd = m * a_uav_des + m * g * kEz - payload.tension * q;

    Wrench w;
    w.f = dot(f_cmd, vehicle.R.col(2));
    const Mat3 R_c = attitude_setpoint(f_cmd, 0.0, Mat3::identity());
    // Level 3: geometric attitude law with -tau_a (quasi-static rate refs).
    w.tau = attitude_law(vehicle, R_c, Vec3{}, Vec3{}, residual.tau_a, gains_, params_);
    return w;
}

ControlCommand mix_to_rotors(const Wrench& wrench, const VehicleParams& params) {
    const double f_max = params.max_rotor_force();
    Wrench w = wrench;
    if (!std::isfinite(w.f)) w.f = 0.0;
    if (!is_finite(w.tau)) w.tau = Vec3{};
    // Thrust priority: clamp collective first, then scale torques into range.
    w.f = std::clamp(w.f, 0.0, 4.0 * f_max);
    const Rotor4 base = rotor_forces_from_wrench({w.f, Vec3{}}, params);
    const Rotor4 dev = rotor_forces_from_wrench({0.0, w.tau}, params);
    double scale = 1.0;
    for (int i = 0; i < 4; ++i) {
        if (dev[i] > 1e-12) scale = std::min(scale, (f_max - base[i]) / dev[i]);
        else if (dev[i] < -1e-12) scale = std::min(scale, (0.0 - base[i]) / dev[i]);
    }
    scale = std::clamp(scale, 0.0, 1.0);

    ControlCommand cmd;
    cmd.f_u = w.f;
    cmd.tau_u = scale * w.tau;
    const Rotor4 forces = rotor_forces_from_wrench({w.f, cmd.tau_u}, params);
    for (int i = 0; i < 4; ++i) {
        const double f = std::clamp(forces[i], 0.0, f_max);
        cmd.rotor_speeds[i] =
            std::clamp(std::sqrt(f / params.kappa_f), params.rotor_speed_min,
                       params.rotor_speed_max);
    }
    return cmd;
}

} // namespace rfl
