#include <cmath>
#include <stdexcept>

#include "rfl/csv.hpp"
#include "rfl/learning.hpp"
#include "rfl/spline_fit.hpp"

namespace rfl {

Dataset make_dataset(const std::vector<FlightLog>& logs, double knot_spacing, LabelMode mode) {
    if (logs.empty()) throw std::invalid_argument("make_dataset: no logs");
    Dataset ds;
    int log_id = 0;
    for (const FlightLog& log : logs) {
        if (log.rows.size() < 8)
            throw std::invalid_argument("make_dataset: log too short");
        std::vector<double> times;
        std::vector<std::vector<double>> labels(kLabelDim);
        times.reserve(log.rows.size());
        double prev_t = log.rows.front().t - log.control_dt;
        for (const LogRow& r : log.rows) {
            if (std::fabs(r.t - prev_t - log.control_dt) > 1e-9)
                throw std::invalid_argument("make_dataset: non-uniform timestamps in log");
            prev_t = r.t;
            times.push_back(r.t);
            labels[0].push_back(r.est_indi.f_a.x);
            labels[1].push_back(r.est_indi.f_a.y);
            labels[2].push_back(r.est_indi.f_a.z);
            labels[3].push_back(r.est_indi.tau_a.x);
            labels[4].push_back(r.est_indi.tau_a.y);
            labels[5].push_back(r.est_indi.tau_a.z);
        }
        const SmoothingSpline spline =
            mode == LabelMode::spline_smoothed
                ? fit_smoothing_spline(times, labels, knot_spacing)
                : SmoothingSpline{};
        for (size_t i = 0; i < log.rows.size(); ++i) {
            const LogRow& r = log.rows[i];
            // Features use the same filtered channels the estimator consumed;
            // vdot is taken from the log so offline and online paths agree.
            const Vec3 c0 = r.state.R.col(0), c1 = r.state.R.col(1);
            ds.features.push_back({r.state.v.x, r.state.v.y, r.state.v.z,
                                   r.vdot_world.x, r.vdot_world.y, r.vdot_world.z,
                                   r.gyro_filt.x, r.gyro_filt.y, r.gyro_filt.z,
                                   c0.x, c0.y, c0.z, c1.x, c1.y, c1.z,
                                   r.frame.pwm[0], r.frame.pwm[1], r.frame.pwm[2],
                                   r.frame.pwm[3]});
            Labels label;
            if (mode == LabelMode::spline_smoothed) {
                for (int c = 0; c < kLabelDim; ++c) label[c] = spline.eval(c, times[i]);
            } else {
                for (int c = 0; c < kLabelDim; ++c) label[c] = labels[c][i];
            }
            ds.labels.push_back(label);
            ds.t.push_back(r.t);
            ds.log_id.push_back(log_id);
        }
        ++log_id;
    }
    ds.stats = NormStats::compute(ds.features, ds.labels);
    return ds;
}

void save_dataset_csv(const Dataset& dataset, const std::string& path) {
    CsvWriter w(path);
    std::vector<std::string> header{"t"};
    for (const auto& n : kFeatureNames) header.push_back(n);
    for (const auto& n : kLabelNames) header.push_back(n);
    header.push_back("log_id");
    w.write_row(header);
    std::vector<std::string> cells;
    for (size_t i = 0; i < dataset.size(); ++i) {
        cells.clear();
        cells.push_back(format_double(dataset.t[i]));
        for (double v : dataset.features[i]) cells.push_back(format_double(v));
        for (double v : dataset.labels[i]) cells.push_back(format_double(v));
        cells.push_back(std::to_string(dataset.log_id[i]));
        w.write_row(cells);
    }
}

Dataset load_dataset_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header.size() != 1 + kFeatureDim + kLabelDim + 1)
        throw std::runtime_error("dataset csv: unexpected column count in " + path);
    Dataset ds;
    for (const auto& row : table.rows) {
        ds.t.push_back(std::stod(row[0]));
        Features f;
        for (int i = 0; i < kFeatureDim; ++i) f[i] = std::stod(row[1 + i]);
        Labels l;
        for (int i = 0; i < kLabelDim; ++i) l[i] = std::stod(row[1 + kFeatureDim + i]);
        ds.features.push_back(f);
        ds.labels.push_back(l);
        ds.log_id.push_back(std::stoi(row[1 + kFeatureDim + kLabelDim]));
    }
    if (ds.size() == 0) throw std::runtime_error("dataset csv: empty dataset in " + path);
    ds.stats = NormStats::compute(ds.features, ds.labels);
    return ds;
}

} // namespace rfl
