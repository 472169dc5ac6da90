#pragma once

#include <string>
#include <vector>

#include "rfl/config.hpp"
#include "rfl/flight_log.hpp"
#include "rfl/learning.hpp"
#include "rfl/residual_source.hpp"

namespace rfl {

struct ExperimentSpec {
    ControllerVariant controller = ControllerVariant::lee;
    std::string trajectory = "figure8"; // figure8|circle|helix|random
    bool payload = false;
    int trials = 10;
    std::uint64_t seed = 0;
    const MlpModel* model = nullptr; // required for ilndi / na_indi
};

// Closed-loop simulation of one flight: physics at sim.physics_dt, control at
// sim.control_rate_hz, the selected residual stream wired into the controller
// with one tick of latency. Deterministic given the seed. Divergence or a
// position error beyond the crash threshold marks the log crashed instead of
// aborting.
FlightLog run_trial(const ExperimentSpec& spec, std::uint64_t seed, const Config& cfg);

// Mean Euclidean distance to the reference over all logged ticks.
double tracking_error(const FlightLog& log, bool payload_target);

struct CellResult {
    ControllerVariant controller;
    std::string trajectory;
    bool payload = false;
    std::vector<double> trial_errors; // per trial, NaN when crashed
    std::vector<bool> trial_crashed;
    std::vector<std::uint64_t> seeds;

    int crash_count() const;
    double mean_error() const; // over completed trials
    double stddev_error() const; // sample std, 0 for a single trial
};

// Runs trials for every spec with paired seeds (seed + trial index), in a
// deterministic order.
std::vector<CellResult> run_grid(const std::vector<ExperimentSpec>& specs, const Config& cfg);

} // namespace rfl
