#include "rfl/flight_log.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rfl/csv.hpp"

namespace rfl {

namespace {

const std::vector<std::string>& log_header() {
    static const std::vector<std::string> header = [] {
        std::vector<std::string> h{"t"};
        auto vec = [&h](const std::string& base) {
            h.push_back(base + "_x");
            h.push_back(base + "_y");
            h.push_back(base + "_z");
        };
        auto quad = [&h](const std::string& base) {
            for (int i = 0; i < 4; ++i) h.push_back(base + std::to_string(i));
        };
        vec("p");
        vec("v");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) h.push_back("r" + std::to_string(r) + std::to_string(c));
        vec("w");
        vec("ref_p");
        vec("ref_v");
        vec("ref_a");
        h.push_back("f_u");
        vec("tau_u");
        quad("cmd");
        vec("accel");
        vec("gyro");
        quad("rpm");
        quad("pwm");
        vec("accel_filt");
        vec("gyro_filt");
        vec("vdot");
        vec("fa_true");
        vec("taua_true");
        vec("fa_indi");
        vec("taua_indi");
        vec("fa_pwm");
        vec("taua_pwm");
        vec("fa_nn");
        vec("taua_nn");
        vec("fa_na");
        vec("taua_na");
        vec("pp");
        vec("pv");
        vec("q");
        h.push_back("tension");
        vec("ref_pp");
        return h;
    }();
    return header;
}

void push_vec(std::vector<double>& out, const Vec3& v) {
    out.push_back(v.x);
    out.push_back(v.y);
    out.push_back(v.z);
}

Vec3 pull_vec(const std::vector<double>& in, size_t& i) {
    Vec3 v{in[i], in[i + 1], in[i + 2]};
    i += 3;
    return v;
}

} // namespace

void write_flight_log_csv(const FlightLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("flight log: cannot write " + path);
    out << "# controller=" << log.controller << "\n";
    out << "# trajectory=" << log.trajectory << "\n";
    out << "# seed=" << log.seed << "\n";
    out << "# payload=" << (log.payload ? 1 : 0) << "\n";
    out << "# has_nn=" << (log.has_nn ? 1 : 0) << "\n";
    out << "# crashed=" << (log.crashed ? 1 : 0) << "\n";
    out << "# crash_t=" << format_double(log.crash_t) << "\n";
    out << "# control_dt=" << format_double(log.control_dt) << "\n";
    const auto& header = log_header();
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    std::vector<double> cells;
    for (const LogRow& r : log.rows) {
        cells.clear();
        cells.push_back(r.t);
        push_vec(cells, r.state.p);
        push_vec(cells, r.state.v);
        for (double m : r.state.R.m) cells.push_back(m);
        push_vec(cells, r.state.omega);
        push_vec(cells, r.ref_p);
        push_vec(cells, r.ref_v);
        push_vec(cells, r.ref_a);
        cells.push_back(r.f_u);
        push_vec(cells, r.tau_u);
        for (double c : r.rotor_cmd) cells.push_back(c);
        push_vec(cells, r.frame.accel);
        push_vec(cells, r.frame.gyro);
        for (double c : r.frame.rpm) cells.push_back(c);
        for (double c : r.frame.pwm) cells.push_back(c);
        push_vec(cells, r.accel_filt);
        push_vec(cells, r.gyro_filt);
        push_vec(cells, r.vdot_world);
        push_vec(cells, r.est_true.f_a);
        push_vec(cells, r.est_true.tau_a);
        push_vec(cells, r.est_indi.f_a);
        push_vec(cells, r.est_indi.tau_a);
        push_vec(cells, r.est_pwm.f_a);
        push_vec(cells, r.est_pwm.tau_a);
        push_vec(cells, r.est_nn.f_a);
        push_vec(cells, r.est_nn.tau_a);
        push_vec(cells, r.est_na.f_a);
        push_vec(cells, r.est_na.tau_a);
        push_vec(cells, r.payload_p);
        push_vec(cells, r.payload_v);
        push_vec(cells, r.payload_q);
        cells.push_back(r.tension);
        push_vec(cells, r.payload_ref_p);
        for (size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << format_double(cells[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("flight log: write failed for " + path);
}

FlightLog read_flight_log_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("flight log: cannot open " + path);
    FlightLog log;
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key == "controller") log.controller = value;
            else if (key == "trajectory") log.trajectory = value;
            else if (key == "seed") log.seed = std::stoull(value);
            else if (key == "payload") log.payload = value == "1";
            else if (key == "has_nn") log.has_nn = value == "1";
            else if (key == "crashed") log.crashed = value == "1";
            else if (key == "crash_t") log.crash_t = std::stod(value);
            else if (key == "control_dt") log.control_dt = std::stod(value);
            continue;
        }
        header = split_csv_line(line);
        break;
    }
    if (header != log_header())
        throw std::runtime_error("flight log: unexpected schema in " + path);
    std::vector<double> cells(header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        size_t n = 0;
        while (std::getline(ss, cell, ',')) {
            if (n >= cells.size()) throw std::runtime_error("flight log: ragged row in " + path);
            cells[n++] = std::stod(cell);
        }
        if (n != cells.size()) throw std::runtime_error("flight log: ragged row in " + path);
        LogRow r;
        size_t i = 0;
        r.t = cells[i++];
        r.state.p = pull_vec(cells, i);
        r.state.v = pull_vec(cells, i);
        for (int k = 0; k < 9; ++k) r.state.R.m[k] = cells[i++];
        r.state.omega = pull_vec(cells, i);
        r.ref_p = pull_vec(cells, i);
        r.ref_v = pull_vec(cells, i);
        r.ref_a = pull_vec(cells, i);
        r.f_u = cells[i++];
        r.tau_u = pull_vec(cells, i);
        for (int k = 0; k < 4; ++k) r.rotor_cmd[k] = cells[i++];
        r.frame.accel = pull_vec(cells, i);
        r.frame.gyro = pull_vec(cells, i);
        for (int k = 0; k < 4; ++k) r.frame.rpm[k] = cells[i++];
        for (int k = 0; k < 4; ++k) r.frame.pwm[k] = cells[i++];
        r.frame.t = r.t;
        r.accel_filt = pull_vec(cells, i);
        r.gyro_filt = pull_vec(cells, i);
        r.vdot_world = pull_vec(cells, i);
        r.est_true.f_a = pull_vec(cells, i);
        r.est_true.tau_a = pull_vec(cells, i);
        r.est_indi.f_a = pull_vec(cells, i);
        r.est_indi.tau_a = pull_vec(cells, i);
        r.est_pwm.f_a = pull_vec(cells, i);
        r.est_pwm.tau_a = pull_vec(cells, i);
        r.est_nn.f_a = pull_vec(cells, i);
        r.est_nn.tau_a = pull_vec(cells, i);
        r.est_na.f_a = pull_vec(cells, i);
        r.est_na.tau_a = pull_vec(cells, i);
        r.payload_p = pull_vec(cells, i);
        r.payload_v = pull_vec(cells, i);
        r.payload_q = pull_vec(cells, i);
        r.tension = cells[i++];
        r.payload_ref_p = pull_vec(cells, i);
        log.rows.push_back(r);
    }
    return log;
}

} // namespace rfl
