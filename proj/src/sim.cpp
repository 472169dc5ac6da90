#include "rfl/sim.hpp"

#include <algorithm>
#include <cmath>

namespace rfl {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct BodyDeriv {
    Vec3 dp, dv;
    Mat3 dR;
    Vec3 domega;
};

BodyDeriv body_deriv(const VehicleState& s, const Wrench& w, const Vec3& f_a, const Vec3& tau_a,
                     const Vec3& cable_force, const VehicleParams& params, const Mat3& inertia_inv) {
    BodyDeriv d;
    d.dp = s.v;
    d.dv = (w.f * s.R.col(2) - params.mass * params.gravity * kEz + f_a + cable_force) *
           (1.0 / params.mass);
    d.dR = s.R * hat(s.omega);
    const Vec3 j_omega = params.inertia * s.omega;
    d.domega = inertia_inv * (cross(j_omega, s.omega) + w.tau + tau_a);
    return d;
}

VehicleState apply(const VehicleState& s, const BodyDeriv& d, double h) {
    VehicleState out;
    out.p = s.p + h * d.dp;
    out.v = s.v + h * d.dv;
    out.R = s.R + h * d.dR;
    out.omega = s.omega + h * d.domega;
    return out;
}

} // namespace

double gaussian(std::uint64_t& rng_state) {
    const double u1 = (splitmix64(rng_state) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    const double u2 = (splitmix64(rng_state) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint64_t splitmix64(std::uint64_t& seed_state) {
    std::uint64_t z = (seed_state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

VehicleState step_multirotor(const VehicleState& state, const Rotor4& rotor_speeds,
                             const ResidualModel& model, const VehicleParams& params,
                             double dt, double t) {
    if (!(dt > 0.0) || dt > 0.01) throw std::invalid_argument("step_multirotor: dt out of (0, 0.01]");
    const Wrench w = wrench_from_rotor_forces(motor_forces(rotor_speeds, params), params);
    const Mat3 inertia_inv = inverse(params.inertia);

    auto f = [&](const VehicleState& s, double ts) {
        const auto [f_a, tau_a] = model.eval(s, ts);
        return body_deriv(s, w, f_a, tau_a, Vec3{}, params, inertia_inv);
    };

    const BodyDeriv k1 = f(state, t);
    const BodyDeriv k2 = f(apply(state, k1, 0.5 * dt), t + 0.5 * dt);
    const BodyDeriv k3 = f(apply(state, k2, 0.5 * dt), t + 0.5 * dt);
    const BodyDeriv k4 = f(apply(state, k3, dt), t + dt);

    VehicleState out;
    out.p = state.p + (dt / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
    out.v = state.v + (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    out.R = state.R + (dt / 6.0) * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
    out.omega = state.omega + (dt / 6.0) * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
    out.R = orthonormalize(out.R);
    if (!out.finite()) throw SimDivergence("step_multirotor: state diverged");
    return out;
}

double cable_tension(const VehicleState& vehicle, const PayloadState& payload,
                     const Rotor4& rotor_speeds, const ResidualModel& model,
                     const VehicleParams& params, const PayloadParams& pparams, double t) {
    const Wrench w = wrench_from_rotor_forces(motor_forces(rotor_speeds, params), params);
    const auto [f_a, tau_a] = model.eval(vehicle, t);
    (void)tau_a;
    const Vec3 q = normalized(payload.p - vehicle.p);
    const Vec3 v_rel = payload.v - vehicle.v;
    const double m = params.mass, mp = pparams.mass, l = pparams.cable_length;
    // From d^2/dt^2 |p_p - p|^2 = 0 with both bodies' dynamics substituted.
    return mp * (m * norm_sq(v_rel) / l - dot(q, w.f * vehicle.R.col(2) + f_a)) / (m + mp);
}

void step_payload_system(VehicleState& vehicle, PayloadState& payload, const Rotor4& rotor_speeds,
                         const ResidualModel& model, const VehicleParams& params,
                         const PayloadParams& pparams, double dt, double t) {
    if (!(dt > 0.0) || dt > 0.01)
        throw std::invalid_argument("step_payload_system: dt out of (0, 0.01]");
    const double l = pparams.cable_length;
    if (std::fabs(norm(payload.p - vehicle.p) - l) > 1e-6)
        throw std::invalid_argument("step_payload_system: cable not taut at entry");

    const double entry_tension =
        cable_tension(vehicle, payload, rotor_speeds, model, params, pparams, t);
    const Wrench w = wrench_from_rotor_forces(motor_forces(rotor_speeds, params), params);
    const Mat3 inertia_inv = inverse(params.inertia);
    const double m = params.mass, mp = pparams.mass;
    const bool taut = entry_tension >= 0.0;

    struct Stage {
        BodyDeriv uav;
        Vec3 dpp, dvp;
    };
    auto f = [&](const VehicleState& vs, const PayloadState& ps, double ts) {
        const auto [f_a, tau_a] = model.eval(vs, ts);
        Stage st;
        double tension = 0.0;
        Vec3 q{};
        if (taut) {
            q = normalized(ps.p - vs.p);
            const Vec3 v_rel = ps.v - vs.v;
            tension = mp * (m * norm_sq(v_rel) / l - dot(q, w.f * vs.R.col(2) + f_a)) / (m + mp);
        }
        st.uav = body_deriv(vs, w, f_a, tau_a, tension * q, params, inertia_inv);
        st.dpp = ps.v;
        st.dvp = (-tension / mp) * q - params.gravity * kEz;
        return st;
    };

    auto apply_pair = [&](const VehicleState& vs, const PayloadState& ps, const Stage& st,
                          double h) {
        PayloadState pout = ps;
        pout.p = ps.p + h * st.dpp;
        pout.v = ps.v + h * st.dvp;
        return std::pair{apply(vs, st.uav, h), pout};
    };

    const Stage k1 = f(vehicle, payload, t);
    const auto [vs2, ps2] = apply_pair(vehicle, payload, k1, 0.5 * dt);
    const Stage k2 = f(vs2, ps2, t + 0.5 * dt);
    const auto [vs3, ps3] = apply_pair(vehicle, payload, k2, 0.5 * dt);
    const Stage k3 = f(vs3, ps3, t + 0.5 * dt);
    const auto [vs4, ps4] = apply_pair(vehicle, payload, k3, dt);
    const Stage k4 = f(vs4, ps4, t + dt);

    VehicleState vout;
    vout.p = vehicle.p + (dt / 6.0) * (k1.uav.dp + 2.0 * k2.uav.dp + 2.0 * k3.uav.dp + k4.uav.dp);
    vout.v = vehicle.v + (dt / 6.0) * (k1.uav.dv + 2.0 * k2.uav.dv + 2.0 * k3.uav.dv + k4.uav.dv);
    vout.R = vehicle.R + (dt / 6.0) * (k1.uav.dR + 2.0 * k2.uav.dR + 2.0 * k3.uav.dR + k4.uav.dR);
    vout.omega = vehicle.omega + (dt / 6.0) * (k1.uav.domega + 2.0 * k2.uav.domega +
                                               2.0 * k3.uav.domega + k4.uav.domega);
    vout.R = orthonormalize(vout.R);

    PayloadState pout = payload;
    pout.p = payload.p + (dt / 6.0) * (k1.dpp + 2.0 * k2.dpp + 2.0 * k3.dpp + k4.dpp);
    pout.v = payload.v + (dt / 6.0) * (k1.dvp + 2.0 * k2.dvp + 2.0 * k3.dvp + k4.dvp);

    if (taut || norm(pout.p - vout.p) >= l) {
        // Project back onto the constraint: exact cable length and zero
        // radial separation rate (inelastic cable).
        const Vec3 q = normalized(pout.p - vout.p);
        pout.p = vout.p + l * q;
        const Vec3 v_rel = pout.v - vout.v;
        pout.v = pout.v - dot(v_rel, q) * q;
        pout.q = q;
    } else {
        pout.q = normalized(pout.p - vout.p);
    }
    if (!vout.finite() || !pout.finite())
        throw SimDivergence("step_payload_system: state diverged");
    pout.tension = cable_tension(vout, pout, rotor_speeds, model, params, pparams, t + dt);
    if (pout.tension < 0.0) pout.tension = 0.0;
    vehicle = vout;
    payload = pout;
}

NoiseConfig NoiseConfig::from_config(const Config& cfg) {
    NoiseConfig n;
    n.accel_sigma = cfg.get_double("noise.accel_sigma", 0.0);
    n.gyro_sigma = cfg.get_double("noise.gyro_sigma", 0.0);
    n.rpm_sigma = cfg.get_double("noise.rpm_sigma", 0.0);
    return n;
}

Simulator::Simulator(VehicleParams params, ResidualModel model, NoiseConfig noise,
                     std::uint64_t seed, double physics_dt)
    : params_(std::move(params)),
      model_(std::move(model)),
      noise_(noise),
      physics_dt_(physics_dt),
      rng_(seed) {
    if (!(physics_dt_ > 0.0) || physics_dt_ > 0.01)
        throw std::invalid_argument("Simulator: physics_dt out of (0, 0.01]");
}

void Simulator::reset(const VehicleState& state) {
    state_ = state;
    has_payload_ = false;
    t_ = 0.0;
}

void Simulator::reset_with_payload(const VehicleState& state, const PayloadState& payload,
                                   const PayloadParams& pparams) {
    state_ = state;
    payload_ = payload;
    pparams_ = pparams;
    has_payload_ = true;
    t_ = 0.0;
    payload_.q = normalized(payload_.p - state_.p);
    payload_.tension = cable_tension(state_, payload_, rotor_speeds_, model_, params_, pparams_, t_);
}

void Simulator::set_rotor_speeds(const Rotor4& speeds) { rotor_speeds_ = speeds; }

void Simulator::advance(const Rotor4& cmd_speeds, double duration) {
    const double n_real = duration / physics_dt_;
    const int n = static_cast<int>(std::lround(n_real));
    if (n < 1 || std::fabs(n_real - n) > 1e-9)
        throw std::invalid_argument("Simulator::advance: duration must be a multiple of physics_dt");
    for (int i = 0; i < n; ++i) {
        if (has_payload_)
            step_payload_system(state_, payload_, rotor_speeds_, model_, params_, pparams_,
                                physics_dt_, t_);
        else
            state_ = step_multirotor(state_, rotor_speeds_, model_, params_, physics_dt_, t_);
        // First-order motor lag, exact discretization.
        if (params_.motor_tau > 0.0) {
            const double a = 1.0 - std::exp(-physics_dt_ / params_.motor_tau);
            for (int r = 0; r < 4; ++r) rotor_speeds_[r] += a * (cmd_speeds[r] - rotor_speeds_[r]);
        } else {
            rotor_speeds_ = cmd_speeds;
        }
        t_ += physics_dt_;
    }
}

Vec3 Simulator::world_accel() const {
    const Wrench w = wrench_from_rotor_forces(motor_forces(rotor_speeds_, params_), params_);
    const auto [f_a, tau_a] = model_.eval(state_, t_);
    (void)tau_a;
    Vec3 cable;
    if (has_payload_) cable = payload_.tension * payload_.q;
    return (w.f * state_.R.col(2) - params_.mass * params_.gravity * kEz + f_a + cable) *
           (1.0 / params_.mass);
}

SensorFrame Simulator::sense(const Rotor4& cmd_speeds) {
    SensorFrame frame;
    frame.t = t_;
    // Specific force: R^T (vdot + g e_z).
    const Vec3 a_world = world_accel();
    frame.accel = transpose(state_.R) * (a_world + params_.gravity * kEz);
    frame.gyro = state_.omega;
    for (int r = 0; r < 4; ++r) {
        frame.rpm[r] = rotor_speeds_[r];
        frame.pwm[r] = std::clamp(cmd_speeds[r] / params_.rotor_speed_max, 0.0, 1.0);
    }
    if (noise_.any()) {
        for (int i = 0; i < 3; ++i) frame.accel[i] += noise_.accel_sigma * gaussian(rng_);
        for (int i = 0; i < 3; ++i) frame.gyro[i] += noise_.gyro_sigma * gaussian(rng_);
        for (int r = 0; r < 4; ++r) frame.rpm[r] += noise_.rpm_sigma * gaussian(rng_);
    }
    return frame;
}

} // namespace rfl
