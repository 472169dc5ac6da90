#include "rfl/residual_source.hpp"

#include <stdexcept>

namespace rfl {

ControllerVariant controller_variant_from_string(const std::string& name) {
    if (name == "lee") return ControllerVariant::lee;
    if (name == "indi") return ControllerVariant::indi;
    if (name == "indi_pwm") return ControllerVariant::indi_pwm;
    if (name == "ilndi") return ControllerVariant::ilndi;
    if (name == "na_indi") return ControllerVariant::na_indi;
    throw std::invalid_argument("unknown controller variant '" + name + "'");
}

std::string to_string(ControllerVariant variant) {
    switch (variant) {
        case ControllerVariant::lee: return "lee";
        case ControllerVariant::indi: return "indi";
        case ControllerVariant::indi_pwm: return "indi_pwm";
        case ControllerVariant::ilndi: return "ilndi";
        case ControllerVariant::na_indi: return "na_indi";
    }
    return "?";
}

ResidualPipeline::ResidualPipeline(ControllerVariant variant, const IndiParams& params,
                                   const VehicleParams& vehicle,
                                   std::optional<PayloadParams> payload, const MlpModel* model)
    : variant_(variant),
      model_(model),
      gravity_(vehicle.gravity),
      indi_(params, vehicle, IndiEstimator::WrenchSource::rpm, payload),
      pwm_(params, vehicle, IndiEstimator::WrenchSource::pwm, payload) {
    if ((variant == ControllerVariant::ilndi || variant == ControllerVariant::na_indi) &&
        model == nullptr)
        throw std::invalid_argument("ResidualPipeline: variant '" + to_string(variant) +
                                    "' needs a trained model");
    if (model != nullptr) na_ = std::make_unique<NaIndiEstimator>(params, vehicle, payload);
}

void ResidualPipeline::update(const SensorFrame& frame, const VehicleState& state,
                              const PayloadState* payload) {
    indi_.update(frame, state, payload);
    pwm_.update(frame, state, payload);
    if (model_ != nullptr) {
        SensorFrame filt = frame;
        filt.accel = indi_.filtered_accel();
        filt.gyro = indi_.filtered_gyro();
        nn_est_ = model_->predict(build_features(state, filt, gravity_), frame.t);
        na_->update(frame, state, payload, nn_est_);
    }
}

ResidualFeedforward ResidualPipeline::feedforward() const {
    ResidualEstimate e;
    switch (variant_) {
        case ControllerVariant::lee:
            return {};
        case ControllerVariant::indi:
            if (!indi_.ready()) return {};
            e = indi_.estimate();
            break;
        case ControllerVariant::indi_pwm:
            if (!pwm_.ready()) return {};
            e = pwm_.estimate();
            break;
        case ControllerVariant::ilndi:
            if (!indi_.ready()) return {};
            e = nn_est_;
            break;
        case ControllerVariant::na_indi:
            if (!na_ || !na_->ready()) return {};
            e = na_->estimate();
            break;
    }
    return {e.f_a, e.tau_a};
}

} // namespace rfl
