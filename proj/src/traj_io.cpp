#include <cmath>
#include <stdexcept>

#include "rfl/csv.hpp"
#include "rfl/trajectory.hpp"

namespace rfl {

namespace {

class SampledTrajectory final : public FlatTrajectory {
  public:
    SampledTrajectory(std::vector<double> times, std::vector<FlatSample> samples)
        : times_(std::move(times)), samples_(std::move(samples)) {
        double best = 0.0;
        for (const auto& s : samples_) best = std::max(best, norm(s.v));
        max_speed_ = best;
    }

    double duration() const override { return times_.back(); }
    double max_speed() const override { return max_speed_; }
    std::string name() const override { return "imported"; }

    FlatSample sample(double t) const override {
        if (t <= times_.front()) return samples_.front();
        if (t >= times_.back()) return samples_.back();
        size_t lo = 0, hi = times_.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            if (times_[mid] <= t) lo = mid;
            else hi = mid;
        }
        const double u = (t - times_[lo]) / (times_[hi] - times_[lo]);
        auto lerp = [u](const Vec3& a, const Vec3& b) { return (1.0 - u) * a + u * b; };
        const FlatSample &a = samples_[lo], &b = samples_[hi];
        FlatSample fs;
        fs.p = lerp(a.p, b.p);
        fs.v = lerp(a.v, b.v);
        fs.a = lerp(a.a, b.a);
        fs.j = lerp(a.j, b.j);
        fs.s = lerp(a.s, b.s);
        fs.yaw = (1.0 - u) * a.yaw + u * b.yaw;
        return fs;
    }

  private:
    std::vector<double> times_;
    std::vector<FlatSample> samples_;
    double max_speed_;
};

} // namespace

void export_trajectory_csv(const FlatTrajectory& traj, double dt, const std::string& path) {
    if (!(dt > 0.0)) throw std::invalid_argument("export_trajectory_csv: dt must be > 0");
    CsvWriter w(path);
    w.write_row({"t", "px", "py", "pz", "vx", "vy", "vz", "ax", "ay", "az",
                 "jx", "jy", "jz", "sx", "sy", "sz", "yaw"});
    const long n = std::lround(traj.duration() / dt);
    for (long i = 0; i <= n; ++i) {
        const double t = std::min(i * dt, traj.duration());
        const FlatSample fs = traj.sample(t);
        w.write_doubles({t, fs.p.x, fs.p.y, fs.p.z, fs.v.x, fs.v.y, fs.v.z,
                         fs.a.x, fs.a.y, fs.a.z, fs.j.x, fs.j.y, fs.j.z,
                         fs.s.x, fs.s.y, fs.s.z, fs.yaw});
    }
}

std::unique_ptr<FlatTrajectory> import_trajectory_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header.size() != 17 || table.header[0] != "t")
        throw std::runtime_error("trajectory csv: unexpected header in " + path);
    if (table.rows.size() < 2)
        throw std::runtime_error("trajectory csv: need at least 2 samples in " + path);
    std::vector<double> times;
    std::vector<FlatSample> samples;
    double prev_t = -1.0;
    for (const auto& row : table.rows) {
        double v[17];
        for (int i = 0; i < 17; ++i) v[i] = std::stod(row[i]);
        if (v[0] <= prev_t) throw std::runtime_error("trajectory csv: times must increase");
        prev_t = v[0];
        times.push_back(v[0]);
        FlatSample fs;
        fs.p = {v[1], v[2], v[3]};
        fs.v = {v[4], v[5], v[6]};
        fs.a = {v[7], v[8], v[9]};
        fs.j = {v[10], v[11], v[12]};
        fs.s = {v[13], v[14], v[15]};
        fs.yaw = v[16];
        samples.push_back(fs);
    }
    return std::make_unique<SampledTrajectory>(std::move(times), std::move(samples));
}

} // namespace rfl
