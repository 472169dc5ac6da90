#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "rfl/residual_model.hpp"
#include "rfl/vehicle.hpp"

namespace rfl {

struct SimDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simulated IMU / actuator measurements at one control tick.
struct SensorFrame {
    Vec3 accel;            // specific force, body frame, m/s^2
    Vec3 gyro;             // rad/s, body frame
    Rotor4 rpm{};          // rad/s, lagged rotor speeds
    Rotor4 pwm{};          // commanded speed / speed_max, before motor lag
    double t = 0.0;        // s
};

struct NoiseConfig {
    double accel_sigma = 0.0; // m/s^2 per axis
    double gyro_sigma = 0.0;  // rad/s per axis
    double rpm_sigma = 0.0;   // rad/s per rotor

    static NoiseConfig from_config(const Config& cfg);
    bool any() const { return accel_sigma > 0.0 || gyro_sigma > 0.0 || rpm_sigma > 0.0; }
};

// One RK4 step of the rigid-body dynamics under actual rotor speeds.
// dt must be in (0, 0.01]. R is re-orthonormalized after the step.
VehicleState step_multirotor(const VehicleState& state, const Rotor4& rotor_speeds,
                             const ResidualModel& model, const VehicleParams& params,
                             double dt, double t);

// Coupled UAV + taut-cable payload step. Requires | |p_p - p| - l | < 1e-6 at
// entry. If the entry tension is negative the two bodies are integrated
// decoupled for this step; otherwise the taut constraint is re-projected after
// the step.
void step_payload_system(VehicleState& vehicle, PayloadState& payload, const Rotor4& rotor_speeds,
                         const ResidualModel& model, const VehicleParams& params,
                         const PayloadParams& pparams, double dt, double t);

// Cable tension from the constraint at the given configuration (Newton pair
// along the cable, >= 0 when taut).
double cable_tension(const VehicleState& vehicle, const PayloadState& payload,
                     const Rotor4& rotor_speeds, const ResidualModel& model,
                     const VehicleParams& params, const PayloadParams& pparams, double t);

// Deterministic standard normal draws (Box-Muller on the given engine).
double gaussian(std::uint64_t& rng_state);
std::uint64_t splitmix64(std::uint64_t& seed_state);

// Owns motor-lag state, time, and the sensor noise stream. One instance per
// simulated vehicle; stepping is sequential.
class Simulator {
  public:
    Simulator(VehicleParams params, ResidualModel model, NoiseConfig noise, std::uint64_t seed,
              double physics_dt = 1e-3);

    void reset(const VehicleState& state);
    void reset_with_payload(const VehicleState& state, const PayloadState& payload,
                            const PayloadParams& pparams);
    // Initialize the lagged rotor speeds (e.g. at hover) to avoid a spin-up
    // transient at t = 0.
    void set_rotor_speeds(const Rotor4& speeds);

    // Advance by `duration` (must be a multiple of physics_dt) holding the
    // commanded rotor speeds constant. Motor lag is applied at physics rate.
    void advance(const Rotor4& cmd_speeds, double duration);

    SensorFrame sense(const Rotor4& cmd_speeds);

    const VehicleState& state() const { return state_; }
    const PayloadState& payload() const { return payload_; }
    bool has_payload() const { return has_payload_; }
    const Rotor4& rotor_speeds() const { return rotor_speeds_; }
    double time() const { return t_; }
    const VehicleParams& params() const { return params_; }
    const PayloadParams& payload_params() const { return pparams_; }
    const ResidualModel& residual_model() const { return model_; }

    // World-frame acceleration of the vehicle under current forces.
    Vec3 world_accel() const;

  private:
    VehicleParams params_;
    PayloadParams pparams_;
    ResidualModel model_;
    NoiseConfig noise_;
    double physics_dt_;
    VehicleState state_;
    PayloadState payload_;
    bool has_payload_ = false;
    Rotor4 rotor_speeds_{};
    double t_ = 0.0;
    std::uint64_t rng_ = 0;
};

} // namespace rfl
