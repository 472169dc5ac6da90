#pragma once

#include <optional>
#include <string>

#include "rfl/butterworth.hpp"
#include "rfl/sim.hpp"
#include "rfl/vehicle.hpp"

namespace rfl {

enum class ResidualSourceTag { truth, indi, indi_pwm, nn, na_indi };

std::string to_string(ResidualSourceTag tag);

struct ResidualEstimate {
    Vec3 f_a;   // N, world frame
    Vec3 tau_a; // N*m, body frame
    ResidualSourceTag source = ResidualSourceTag::indi;
    double t = 0.0;
};

struct IndiParams {
    double cutoff_hz = 8.0;
    double sample_rate_hz = 500.0;
    int warmup_samples = 5;

    static IndiParams from_config(const Config& cfg);
};

// Online residual estimation by model inversion: filtered IMU and
// rotor-wrench channels, numeric differentiation for omega_dot and the
// payload acceleration. The pwm variant maps commanded PWM through the static
// motor model instead of using measured RPM, so it cannot see motor lag.
class IndiEstimator {
  public:
    enum class WrenchSource { rpm, pwm };

    IndiEstimator(const IndiParams& params, const VehicleParams& vehicle,
                  WrenchSource source = WrenchSource::rpm,
                  std::optional<PayloadParams> payload = std::nullopt);

    void update(const SensorFrame& frame, const VehicleState& state,
                const PayloadState* payload = nullptr);

    bool ready() const { return count_ >= params_.warmup_samples; }
    // Throws std::logic_error until `warmup_samples` updates have been fed.
    ResidualEstimate estimate() const;

    // Filtered channels from the last update (used as MLP features).
    Vec3 filtered_accel() const { return accel_filt_; }
    Vec3 filtered_gyro() const { return gyro_filt_; }
    Vec3 world_vdot() const { return vdot_world_; }
    double filter_time_constant() const;

  private:
    IndiParams params_;
    VehicleParams vehicle_;
    WrenchSource source_;
    std::optional<PayloadParams> pparams_;
    double dt_;

    ButterworthVec3 accel_f_, gyro_f_;
    ButterworthBank<4> wrench_f_;
    ButterworthVec3 payload_acc_f_;

    int count_ = 0;
    Vec3 accel_filt_, gyro_filt_, gyro_filt_prev_;
    Vec3 vdot_world_;
    Vec3 payload_p_prev_, payload_v_est_prev_;
    int payload_count_ = 0;
    ResidualEstimate last_{};
};

// Neural-augmented estimator: the network carries part of the residual and
// the inversion reasons only about the remainder. The prediction is filtered
// like the measured channels before it is subtracted, so the total equals the
// plain estimate plus the high-frequency content of the prediction; a zero
// prediction reduces exactly to the plain estimate.
class NaIndiEstimator {
  public:
    NaIndiEstimator(const IndiParams& params, const VehicleParams& vehicle,
                    std::optional<PayloadParams> payload = std::nullopt);

    void update(const SensorFrame& frame, const VehicleState& state, const PayloadState* payload,
                const ResidualEstimate& nn_prediction);

    bool ready() const { return base_.ready(); }
    ResidualEstimate estimate() const;
    const IndiEstimator& base() const { return base_; }

  private:
    IndiEstimator base_;
    ButterworthBank<6> nn_f_;
    ResidualEstimate last_{};
};

} // namespace rfl
