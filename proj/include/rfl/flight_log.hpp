#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfl/indi.hpp"
#include "rfl/sim.hpp"
#include "rfl/vehicle.hpp"

namespace rfl {

// One control tick of a simulated flight.
struct LogRow {
    double t = 0.0;
    VehicleState state;
    Vec3 ref_p, ref_v, ref_a;
    double f_u = 0.0;
    Vec3 tau_u;
    Rotor4 rotor_cmd{};
    SensorFrame frame;
    // Estimator channels (filtered measurements and the world-frame
    // acceleration used as an MLP feature).
    Vec3 accel_filt, gyro_filt, vdot_world;
    ResidualEstimate est_true, est_indi, est_pwm, est_nn, est_na;
    Vec3 payload_p, payload_v, payload_q;
    double tension = 0.0;
    Vec3 payload_ref_p;
};

struct FlightLog {
    std::string controller;
    std::string trajectory;
    std::uint64_t seed = 0;
    bool payload = false;
    bool has_nn = false;
    bool crashed = false;
    double crash_t = -1.0;
    double control_dt = 0.002;
    std::vector<LogRow> rows;
};

void write_flight_log_csv(const FlightLog& log, const std::string& path);
FlightLog read_flight_log_csv(const std::string& path);

} // namespace rfl
