#include "rfl/indi.hpp"

#include <stdexcept>

namespace rfl {

std::string to_string(ResidualSourceTag tag) {
    switch (tag) {
        case ResidualSourceTag::truth: return "true";
        case ResidualSourceTag::indi: return "indi";
        case ResidualSourceTag::indi_pwm: return "indi_pwm";
        case ResidualSourceTag::nn: return "nn";
        case ResidualSourceTag::na_indi: return "na_indi";
    }
    return "?";
}

IndiParams IndiParams::from_config(const Config& cfg) {
    IndiParams p;
    p.cutoff_hz = cfg.get_double("indi.cutoff_hz", p.cutoff_hz);
    p.sample_rate_hz = cfg.get_double("sim.control_rate_hz", p.sample_rate_hz);
    p.warmup_samples = cfg.get_int("indi.warmup_samples", p.warmup_samples);
    return p;
}

IndiEstimator::IndiEstimator(const IndiParams& params, const VehicleParams& vehicle,
                             WrenchSource source, std::optional<PayloadParams> payload)
    : params_(params),
      vehicle_(vehicle),
      source_(source),
      pparams_(payload),
      dt_(1.0 / params.sample_rate_hz),
      accel_f_(params.cutoff_hz, params.sample_rate_hz),
      gyro_f_(params.cutoff_hz, params.sample_rate_hz),
      wrench_f_(params.cutoff_hz, params.sample_rate_hz),
      payload_acc_f_(params.cutoff_hz, params.sample_rate_hz) {}

double IndiEstimator::filter_time_constant() const {
    return Butterworth2(params_.cutoff_hz, params_.sample_rate_hz).time_constant();
}

void IndiEstimator::update(const SensorFrame& frame, const VehicleState& state,
                           const PayloadState* payload) {
    accel_filt_ = accel_f_.step(frame.accel);
    const Vec3 gf = gyro_f_.step(frame.gyro);
    const Vec3 omega_dot = count_ >= 1 ? (gf - gyro_filt_prev_) * (1.0 / dt_) : Vec3{};
    gyro_filt_prev_ = gyro_filt_ = gf;

    Rotor4 speeds{};
    if (source_ == WrenchSource::rpm) {
        speeds = frame.rpm;
    } else {
        for (int i = 0; i < 4; ++i) speeds[i] = frame.pwm[i] * vehicle_.rotor_speed_max;
    }
    const Wrench w_raw = wrench_from_rotor_forces(motor_forces(speeds, vehicle_), vehicle_);
    const auto wf = wrench_f_.step({w_raw.f, w_raw.tau.x, w_raw.tau.y, w_raw.tau.z});
    const double f_u = wf[0];
    const Vec3 tau_u{wf[1], wf[2], wf[3]};

    const double g = vehicle_.gravity;
    vdot_world_ = state.R * accel_filt_ - g * kEz;

    double tension = 0.0;
    Vec3 q{};
    if (payload != nullptr && pparams_.has_value()) {
        q = normalized(payload->p - state.p);
        // Payload acceleration from double-differenced position, filtered.
        if (payload_count_ >= 1) {
            const Vec3 v_est = (payload->p - payload_p_prev_) * (1.0 / dt_);
            if (payload_count_ >= 2) {
                const Vec3 a_raw = (v_est - payload_v_est_prev_) * (1.0 / dt_);
                const Vec3 a_filt = payload_acc_f_.step(a_raw);
                tension = pparams_->mass * dot(q, -a_filt - g * kEz);
            }
            payload_v_est_prev_ = v_est;
        }
        payload_p_prev_ = payload->p;
        ++payload_count_;
    }

    // f_a = m vdot - f_u R e_z + m g e_z - T q, with m vdot + m g e_z taken
    // from the specific-force measurement.
    last_.f_a = vehicle_.mass * (state.R * accel_filt_) - f_u * state.R.col(2) - tension * q;
    const Vec3 j_omega = vehicle_.inertia * gf;
    last_.tau_a = vehicle_.inertia * omega_dot - cross(j_omega, gf) - tau_u;
    last_.source = source_ == WrenchSource::rpm ? ResidualSourceTag::indi
                                                : ResidualSourceTag::indi_pwm;
    last_.t = frame.t;
    ++count_;
}

ResidualEstimate IndiEstimator::estimate() const {
    if (!ready())
        throw std::logic_error("IndiEstimator: filters not warmed (need " +
                               std::to_string(params_.warmup_samples) + " samples)");
    return last_;
}

NaIndiEstimator::NaIndiEstimator(const IndiParams& params, const VehicleParams& vehicle,
                                 std::optional<PayloadParams> payload)
    : base_(params, vehicle, IndiEstimator::WrenchSource::rpm, payload),
      nn_f_(params.cutoff_hz, params.sample_rate_hz) {}

void NaIndiEstimator::update(const SensorFrame& frame, const VehicleState& state,
                             const PayloadState* payload, const ResidualEstimate& nn_prediction) {
    if (!is_finite(nn_prediction.f_a) || !is_finite(nn_prediction.tau_a))
        throw std::invalid_argument("NaIndiEstimator: non-finite network prediction");
    base_.update(frame, state, payload);
    const auto nnf = nn_f_.step({nn_prediction.f_a.x, nn_prediction.f_a.y, nn_prediction.f_a.z,
                                 nn_prediction.tau_a.x, nn_prediction.tau_a.y,
                                 nn_prediction.tau_a.z});
    const ResidualEstimate base = base_.ready() ? base_.estimate() : ResidualEstimate{};
    last_.f_a = nn_prediction.f_a + (base.f_a - Vec3{nnf[0], nnf[1], nnf[2]});
    last_.tau_a = nn_prediction.tau_a + (base.tau_a - Vec3{nnf[3], nnf[4], nnf[5]});
    last_.source = ResidualSourceTag::na_indi;
    last_.t = frame.t;
}

ResidualEstimate NaIndiEstimator::estimate() const {
    if (!base_.ready()) throw std::logic_error("NaIndiEstimator: filters not warmed");
    return last_;
}

} // namespace rfl
