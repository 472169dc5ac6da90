#include "rfl/learning.hpp"

namespace rfl {

const std::array<std::string, kFeatureDim> kFeatureNames = {
    "v_x",    "v_y",    "v_z",    "vdot_x", "vdot_y", "vdot_z", "omega_x",
    "omega_y", "omega_z", "r00",    "r10",    "r20",    "r01",    "r11",
    "r21",    "pwm0",   "pwm1",   "pwm2",   "pwm3"};

const std::array<std::string, kLabelDim> kLabelNames = {
    "fa_x", "fa_y", "fa_z", "taua_x", "taua_y", "taua_z"};

Features build_features(const VehicleState& state, const SensorFrame& frame, double gravity) {
    const Vec3 vdot = state.R * frame.accel - gravity * kEz;
    const Vec3 c0 = state.R.col(0);
    const Vec3 c1 = state.R.col(1);
    return {state.v.x, state.v.y, state.v.z,
            vdot.x, vdot.y, vdot.z,
            frame.gyro.x, frame.gyro.y, frame.gyro.z,
            c0.x, c0.y, c0.z,
            c1.x, c1.y, c1.z,
            frame.pwm[0], frame.pwm[1], frame.pwm[2], frame.pwm[3]};
}

} // namespace rfl
