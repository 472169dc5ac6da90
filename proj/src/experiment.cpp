#include "rfl/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "rfl/controllers.hpp"
#include "rfl/trajectory.hpp"

namespace rfl {

namespace {

std::unique_ptr<FlatTrajectory> build_trajectory(const std::string& name, bool payload,
                                                 std::uint64_t seed, const Config& cfg) {
    if (name == "random") {
        RandomWaypointParams p = RandomWaypointParams::from_config(cfg);
        p.seed = seed;
        return make_random_waypoints(p);
    }
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv")
        return import_trajectory_csv(name);
    return make_shape(ShapeParams::from_config(cfg, shape_kind_from_string(name), payload));
}

} // namespace

FlightLog run_trial(const ExperimentSpec& spec, std::uint64_t seed, const Config& cfg) {
    const VehicleParams params = VehicleParams::from_config(cfg);
    const PayloadParams pparams = PayloadParams::from_config(cfg);
    const GainSet gains = GainSet::from_config(cfg, params, pparams);
    const ResidualModel model = ResidualModel::from_config(cfg);
    const NoiseConfig noise = NoiseConfig::from_config(cfg);
    const IndiParams indi_params = IndiParams::from_config(cfg);
    const double physics_dt = cfg.get_double("sim.physics_dt", 1e-3);
    const double control_rate = cfg.get_double("sim.control_rate_hz", 500.0);
    const double control_dt = 1.0 / control_rate;
    const double crash_error = cfg.get_double("eval.crash_error_m", 2.0);

    const auto traj = build_trajectory(spec.trajectory, spec.payload, seed, cfg);

    FlightLog log;
    log.controller = to_string(spec.controller);
    log.trajectory = traj->name();
    log.seed = seed;
    log.payload = spec.payload;
    log.has_nn = spec.model != nullptr;
    log.control_dt = control_dt;

    Simulator sim(params, model, noise, seed, physics_dt);
    const FlatSample start = traj->sample(0.0);
    if (spec.payload) {
        PayloadState payload;
        payload.p = start.p;
        VehicleState vehicle;
        vehicle.p = start.p + pparams.cable_length * kEz;
        sim.reset_with_payload(vehicle, payload, pparams);
        const double hover = params.hover_rotor_speed(params.mass + pparams.mass);
        sim.set_rotor_speeds({hover, hover, hover, hover});
    } else {
        VehicleState vehicle;
        vehicle.p = start.p;
        sim.reset(vehicle);
        const double hover = params.hover_rotor_speed(params.mass);
        sim.set_rotor_speeds({hover, hover, hover, hover});
    }

    ResidualPipeline pipeline(spec.controller, indi_params, params,
                              spec.payload ? std::optional<PayloadParams>(pparams) : std::nullopt,
                              spec.model);
    PayloadController payload_ctrl(gains, params, pparams, control_dt);

    const long ticks = std::lround(traj->duration() / control_dt);
    ResidualFeedforward feedforward; // estimate from the previous tick
    log.rows.reserve(ticks);
    for (long k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * control_dt;
        LogRow row;
        row.t = t;
        try {
            const FullReference ref = flat_expand(*traj, t, params.gravity);
            const VehicleState& state = sim.state();

            Wrench wrench;
            if (spec.payload)
                wrench = payload_ctrl.control(state, sim.payload(), ref, feedforward);
            else
                wrench = lee_control(state, ref, feedforward, gains, params);
            const ControlCommand cmd = mix_to_rotors(wrench, params);

            const SensorFrame frame = sim.sense(cmd.rotor_speeds);
            pipeline.update(frame, state, spec.payload ? &sim.payload() : nullptr);
            feedforward = pipeline.feedforward();

            row.state = state;
            row.ref_p = ref.p;
            row.ref_v = ref.v;
            row.ref_a = ref.a;
            row.f_u = wrench.f;
            row.tau_u = wrench.tau;
            row.rotor_cmd = cmd.rotor_speeds;
            row.frame = frame;
            row.accel_filt = pipeline.filtered_accel();
            row.gyro_filt = pipeline.filtered_gyro();
            row.vdot_world = pipeline.world_vdot();
            const auto [fa_true, taua_true] = sim.residual_model().eval(state, t);
            row.est_true = {fa_true, taua_true, ResidualSourceTag::truth, t};
            row.est_indi = pipeline.indi_estimate();
            row.est_pwm = pipeline.pwm_estimate();
            row.est_nn = pipeline.nn_estimate();
            row.est_na = pipeline.na_estimate();
            if (spec.payload) {
                row.payload_p = sim.payload().p;
                row.payload_v = sim.payload().v;
                row.payload_q = sim.payload().q;
                row.tension = sim.payload().tension;
                row.payload_ref_p = ref.p;
            }
            log.rows.push_back(row);

            const Vec3 tracked = spec.payload ? sim.payload().p : state.p;
            if (norm(tracked - ref.p) > crash_error) {
                log.crashed = true;
                log.crash_t = t;
                break;
            }
            sim.advance(cmd.rotor_speeds, control_dt);
        } catch (const SimDivergence&) {
            log.crashed = true;
            log.crash_t = t;
            break;
        }
    }
    return log;
}

double tracking_error(const FlightLog& log, bool payload_target) {
    if (log.rows.empty()) throw std::invalid_argument("tracking_error: empty log");
    double sum = 0.0;
    for (const LogRow& r : log.rows) {
        const Vec3 p = payload_target ? r.payload_p : r.state.p;
        const Vec3 ref = payload_target ? r.payload_ref_p : r.ref_p;
        sum += norm(p - ref);
    }
    return sum / static_cast<double>(log.rows.size());
}

int CellResult::crash_count() const {
    int n = 0;
    for (bool c : trial_crashed) n += c ? 1 : 0;
    return n;
}

double CellResult::mean_error() const {
    double sum = 0.0;
    int n = 0;
    for (size_t i = 0; i < trial_errors.size(); ++i) {
        if (trial_crashed[i]) continue;
        sum += trial_errors[i];
        ++n;
    }
    return n > 0 ? sum / n : std::nan("");
}

double CellResult::stddev_error() const {
    const double mean = mean_error();
    double sum = 0.0;
    int n = 0;
    for (size_t i = 0; i < trial_errors.size(); ++i) {
        if (trial_crashed[i]) continue;
        const double d = trial_errors[i] - mean;
        sum += d * d;
        ++n;
    }
    return n > 1 ? std::sqrt(sum / (n - 1)) : 0.0;
}

std::vector<CellResult> run_grid(const std::vector<ExperimentSpec>& specs, const Config& cfg) {
    std::vector<CellResult> cells;
    for (const ExperimentSpec& spec : specs) {
        CellResult cell;
        cell.controller = spec.controller;
        cell.trajectory = spec.trajectory;
        cell.payload = spec.payload;
        for (int trial = 0; trial < spec.trials; ++trial) {
            const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(trial);
            const FlightLog log = run_trial(spec, seed, cfg);
            cell.seeds.push_back(seed);
            cell.trial_crashed.push_back(log.crashed);
            cell.trial_errors.push_back(log.crashed ? std::nan("") : tracking_error(log, spec.payload));
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

} // namespace rfl
