#pragma once

#include <memory>
#include <optional>
#include <string>

#include "rfl/controllers.hpp"
#include "rfl/indi.hpp"
#include "rfl/learning.hpp"

namespace rfl {

enum class ControllerVariant { lee, indi, indi_pwm, ilndi, na_indi };

ControllerVariant controller_variant_from_string(const std::string& name);
std::string to_string(ControllerVariant variant);

// Runs every estimator stream in lockstep (RPM inversion, PWM ablation, and,
// when a model is attached, the network and neural-augmented variants) and
// selects the feedforward for the active controller variant. The caller owns
// the one-tick latency: feed the frame for tick k, use `feedforward()` at
// tick k+1.
class ResidualPipeline {
  public:
    ResidualPipeline(ControllerVariant variant, const IndiParams& params,
                     const VehicleParams& vehicle, std::optional<PayloadParams> payload,
                     const MlpModel* model);

    void update(const SensorFrame& frame, const VehicleState& state,
                const PayloadState* payload);

    bool ready() const { return indi_.ready(); }
    ResidualFeedforward feedforward() const;

    // Per-stream estimates from the last update, for logging.
    ResidualEstimate indi_estimate() const { return indi_.ready() ? indi_.estimate() : ResidualEstimate{}; }
    ResidualEstimate pwm_estimate() const {
        auto e = pwm_.ready() ? pwm_.estimate() : ResidualEstimate{};
        e.source = ResidualSourceTag::indi_pwm;
        return e;
    }
    ResidualEstimate nn_estimate() const { return nn_est_; }
    ResidualEstimate na_estimate() const {
        return na_ && na_->ready() ? na_->estimate() : ResidualEstimate{};
    }
    bool has_model() const { return model_ != nullptr; }

    Vec3 filtered_accel() const { return indi_.filtered_accel(); }
    Vec3 filtered_gyro() const { return indi_.filtered_gyro(); }
    Vec3 world_vdot() const { return indi_.world_vdot(); }
    double filter_time_constant() const { return indi_.filter_time_constant(); }

  private:
    ControllerVariant variant_;
    const MlpModel* model_;
    double gravity_;
    IndiEstimator indi_;
    IndiEstimator pwm_;
    std::unique_ptr<NaIndiEstimator> na_;
    ResidualEstimate nn_est_{};
};

} // namespace rfl
