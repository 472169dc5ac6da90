#include "rfl/error_report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "rfl/csv.hpp"

namespace rfl {

const std::vector<HardwareReference>& hardware_reference_table() {
    static const std::vector<HardwareReference> table = {
        // No payload.
        {"lee", "circle", false, 0.0752, 0.0122},
        {"lee", "figure8", false, 0.0729, 0.0031},
        {"indi_cf", "circle", false, 0.4746, 0.0053},
        {"indi_cf", "figure8", false, 0.4743, 0.0215},
        {"indi_cf", "helix", false, 0.3172, 0.0041},
        {"indi_pwm", "circle", false, 0.1827, 0.0097},
        {"indi_pwm", "figure8", false, 0.1889, 0.0182},
        {"indi", "circle", false, 0.0455, 0.0024},
        {"indi", "figure8", false, 0.0453, 0.0031},
        {"indi", "helix", false, 0.0316, 0.0019},
        {"ilndi", "circle", false, 0.0482, 0.0024},
        {"ilndi", "figure8", false, 0.0432, 0.0024},
        {"ilndi", "helix", false, 0.0290, 0.0015},
        {"na_indi", "circle", false, 0.0450, 0.0028},
        {"na_indi", "figure8", false, 0.0413, 0.0013},
        {"na_indi", "helix", false, 0.0286, 0.0011},
        // With payload.
        {"lee", "circle", true, 0.1974, 0.0172},
        {"lee", "figure8", true, 0.3014, 0.0287},
        {"lee", "helix", true, 0.1488, 0.0332},
        {"indi", "circle", true, 0.1263, 0.0291},
        {"indi", "figure8", true, 0.1731, 0.0223},
        {"indi", "helix", true, 0.1144, 0.0462},
        {"ilndi", "circle", true, 0.1318, 0.0233},
        {"ilndi", "figure8", true, 0.2496, 0.0223},
        {"ilndi", "helix", true, 0.1197, 0.0518},
        {"na_indi", "circle", true, 0.1554, 0.0396},
        {"na_indi", "figure8", true, 0.1829, 0.0306},
        {"na_indi", "helix", true, 0.1469, 0.0557},
    };
    return table;
}

std::optional<HardwareReference> hardware_reference(const std::string& controller,
                                                    const std::string& trajectory, bool payload) {
    for (const auto& r : hardware_reference_table())
        if (r.controller == controller && r.trajectory == trajectory && r.payload == payload)
            return r;
    return std::nullopt;
}

void write_report_csv(const std::vector<CellResult>& cells, const std::string& path) {
    CsvWriter w(path);
    w.write_row({"controller", "trajectory", "payload", "trials", "crashes", "mean_error_m",
                 "stddev_error_m", "hw_mean_m", "hw_stddev_m"});
    for (const auto& c : cells) {
        const auto hw = hardware_reference(to_string(c.controller), c.trajectory, c.payload);
        w.write_row({to_string(c.controller), c.trajectory, c.payload ? "1" : "0",
                     std::to_string(c.trial_errors.size()), std::to_string(c.crash_count()),
                     format_double(c.mean_error()), format_double(c.stddev_error()),
                     hw ? format_double(hw->mean) : "", hw ? format_double(hw->stddev) : ""});
    }
}

std::vector<CellResult> read_report_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header.size() != 9 || table.header[0] != "controller")
        throw std::runtime_error("report csv: unexpected schema in " + path);
    std::vector<CellResult> cells;
    for (const auto& row : table.rows) {
        CellResult c;
        c.controller = controller_variant_from_string(row[0]);
        c.trajectory = row[1];
        c.payload = row[2] == "1";
        // Summary-only reload: synthesize one pseudo-trial carrying the mean.
        const int trials = std::stoi(row[3]);
        const int crashes = std::stoi(row[4]);
        const double mean = std::stod(row[5]);
        for (int i = 0; i < trials; ++i) {
            c.trial_crashed.push_back(i < crashes);
            c.trial_errors.push_back(i < crashes ? std::nan("") : mean);
            c.seeds.push_back(0);
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_trials_csv(const std::vector<CellResult>& cells, const std::string& path) {
    CsvWriter w(path);
    w.write_row({"controller", "trajectory", "payload", "seed", "error_m", "crashed"});
    for (const auto& c : cells)
        for (size_t i = 0; i < c.trial_errors.size(); ++i)
            w.write_row({to_string(c.controller), c.trajectory, c.payload ? "1" : "0",
                         std::to_string(c.seeds[i]), format_double(c.trial_errors[i]),
                         c.trial_crashed[i] ? "1" : "0"});
}

namespace {

std::string format_cell(double mean, double stddev, bool crashed) {
    if (crashed || std::isnan(mean)) return "--";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f ± %.4f", mean, stddev);
    return buf;
}

} // namespace

void write_report_markdown(const std::vector<CellResult>& cells, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);

    std::vector<std::string> trajectories;
    std::vector<std::pair<std::string, bool>> controllers;
    for (const auto& c : cells) {
        if (std::find(trajectories.begin(), trajectories.end(), c.trajectory) ==
            trajectories.end())
            trajectories.push_back(c.trajectory);
        const std::pair<std::string, bool> key{to_string(c.controller), c.payload};
        if (std::find(controllers.begin(), controllers.end(), key) == controllers.end())
            controllers.push_back(key);
    }
    auto find_cell = [&](const std::string& ctrl, const std::string& traj,
                         bool payload) -> const CellResult* {
        for (const auto& c : cells)
            if (to_string(c.controller) == ctrl && c.trajectory == traj && c.payload == payload)
                return &c;
        return nullptr;
    };

    out << "# Tracking error (m), simulation\n\n";
    out << "Mean Euclidean deviation from the reference over all ticks; `--` marks cells "
           "with crashed trials.\n\n";
    out << "| controller |";
    for (const auto& t : trajectories) out << " " << t << " |";
    out << "\n|---|";
    for (size_t i = 0; i < trajectories.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& [ctrl, payload] : controllers) {
        out << "| " << ctrl << (payload ? " (payload)" : "") << " |";
        for (const auto& traj : trajectories) {
            const CellResult* c = find_cell(ctrl, traj, payload);
            out << " "
                << (c ? format_cell(c->mean_error(), c->stddev_error(), c->crash_count() > 0)
                      : std::string("n/a"))
                << " |";
        }
        out << "\n";
    }

    out << "\n## Hardware reference (real flights, for context)\n\n";
    out << "Results from the real Crazyflie 2.1 flight experiments this suite mirrors. "
           "Simulation numbers above are not expected to match them.\n\n";
    out << "| controller |";
    for (const auto& t : trajectories) out << " " << t << " |";
    out << "\n|---|";
    for (size_t i = 0; i < trajectories.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& [ctrl, payload] : controllers) {
        out << "| " << ctrl << (payload ? " (payload)" : "") << " |";
        for (const auto& traj : trajectories) {
            const auto hw = hardware_reference(ctrl, traj, payload);
            if (hw)
                out << " " << format_cell(hw->mean, hw->stddev, false) << " |";
            else
                out << " -- |";
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("report: write failed for " + path);
}

void write_plot_trace(const FlightLog& log, const std::string& path) {
    CsvWriter w(path);
    w.write_row({"t", "error_m",
                 "fa_true_x", "fa_true_y", "fa_true_z",
                 "fa_indi_x", "fa_indi_y", "fa_indi_z",
                 "fa_pwm_x", "fa_pwm_y", "fa_pwm_z",
                 "fa_nn_x", "fa_nn_y", "fa_nn_z",
                 "fa_na_x", "fa_na_y", "fa_na_z",
                 "taua_true_z", "taua_indi_z", "taua_nn_z"});
    for (const LogRow& r : log.rows) {
        const Vec3 p = log.payload ? r.payload_p : r.state.p;
        const Vec3 ref = log.payload ? r.payload_ref_p : r.ref_p;
        w.write_doubles({r.t, norm(p - ref),
                         r.est_true.f_a.x, r.est_true.f_a.y, r.est_true.f_a.z,
                         r.est_indi.f_a.x, r.est_indi.f_a.y, r.est_indi.f_a.z,
                         r.est_pwm.f_a.x, r.est_pwm.f_a.y, r.est_pwm.f_a.z,
                         r.est_nn.f_a.x, r.est_nn.f_a.y, r.est_nn.f_a.z,
                         r.est_na.f_a.x, r.est_na.f_a.y, r.est_na.f_a.z,
                         r.est_true.tau_a.z, r.est_indi.tau_a.z, r.est_nn.tau_a.z});
    }
}

} // namespace rfl
