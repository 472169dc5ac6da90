#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfl/experiment.hpp"

namespace rfl {

// Mean +/- std from the real-hardware flight experiments this suite mirrors,
// printed next to simulation results for context. Simulation does not
// reproduce these numbers.
struct HardwareReference {
    std::string controller;
    std::string trajectory;
    bool payload;
    double mean;   // m
    double stddev; // m
};

const std::vector<HardwareReference>& hardware_reference_table();
std::optional<HardwareReference> hardware_reference(const std::string& controller,
                                                    const std::string& trajectory, bool payload);

void write_report_csv(const std::vector<CellResult>& cells, const std::string& path);
std::vector<CellResult> read_report_csv(const std::string& path);

// One row per controller, one column per trajectory; crashed cells render
// "--". The hardware reference numbers are appended as a second table.
void write_report_markdown(const std::vector<CellResult>& cells, const std::string& path);

// Per-trial long-format table: controller, trajectory, payload, seed, error,
// crashed.
void write_trials_csv(const std::vector<CellResult>& cells, const std::string& path);

// Per-tick traces for one log: tracking error plus the residual-estimate
// streams (truth, inversion, network, combined) on the shared timebase.
void write_plot_trace(const FlightLog& log, const std::string& path);

} // namespace rfl
