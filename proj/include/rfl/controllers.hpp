#pragma once

#include "rfl/config.hpp"
#include "rfl/trajectory.hpp"
#include "rfl/vehicle.hpp"

namespace rfl {

struct GainSet {
    // UAV-level gains (Kp/Kv in N/m and N/(m/s), KR/Kw in N*m).
    Mat3 Kp, Kv, KR, Kw;
    // Payload cascade: level 1 payload position (N/m, N/(m/s)), level 2
    // cable direction (1/s^2, 1/s).
    Mat3 Kpp, Kvp, Kq, Kqd;

    static GainSet defaults(const VehicleParams& vehicle, const PayloadParams& payload);
    static GainSet from_config(const Config& cfg, const VehicleParams& vehicle,
                               const PayloadParams& payload);
};

struct ControlCommand {
    double f_u = 0.0;  // N, >= 0 after mixing
    Vec3 tau_u;        // N*m
    Rotor4 rotor_speeds{}; // rad/s, after mixing and saturation
};

// Residual feedforward used by all controllers (zero for the plain variant).
struct ResidualFeedforward {
    Vec3 f_a;   // N, world frame
    Vec3 tau_a; // N*m, body frame
};

// Geometric tracking controller. The attitude setpoint is rebuilt from the
// commanded force direction and the reference yaw so lateral position errors
// produce corrective tilt; with zero errors it coincides with the flatness
// attitude.
Wrench lee_control(const VehicleState& state, const FullReference& ref,
                   const ResidualFeedforward& residual, const GainSet& gains,
                   const VehicleParams& params);

// Cascaded payload controller. Level 1 tracks payload position, level 2 the
// cable direction, level 3 is the geometric attitude law with -tau_a. The
// desired cable rate is finite-differenced at the control rate, so the
// controller is stateful.
class PayloadController {
  public:
    PayloadController(GainSet gains, VehicleParams params, PayloadParams pparams,
                      double control_dt);

    Wrench control(const VehicleState& vehicle, const PayloadState& payload,
                   const FullReference& payload_ref, const ResidualFeedforward& residual);

    void reset();
    Vec3 last_cable_dir_desired() const { return q_d_prev_; }

  private:
    GainSet gains_;
    VehicleParams params_;
    PayloadParams pparams_;
    double dt_;
    Vec3 q_d_prev_;
    bool has_prev_ = false;
};

// Wrench -> rotor speeds through b0 with thrust-priority saturation.
ControlCommand mix_to_rotors(const Wrench& wrench, const VehicleParams& params);

} // namespace rfl
