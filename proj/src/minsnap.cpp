#include <cmath>
#include <stdexcept>

#include "rfl/sim.hpp"
#include "rfl/trajectory.hpp"

namespace rfl {

namespace {

struct Segment {
    double t0 = 0.0;
    double T = 1.0;
    Vec3 start;
    Vec3 delta;
};

// Peak of the 7th-order rest-to-rest profile: max S3'(x) = S3'(1/2) = 35/16.
constexpr double kPeakRatio = 35.0 / 16.0;

class WaypointTrajectory final : public FlatTrajectory {
  public:
    WaypointTrajectory(std::vector<Segment> segments, double max_speed)
        : segments_(std::move(segments)), max_speed_(max_speed) {
        duration_ = segments_.back().t0 + segments_.back().T;
    }

    double duration() const override { return duration_; }
    double max_speed() const override { return max_speed_; }
    std::string name() const override { return "random_waypoints"; }

    FlatSample sample(double t) const override {
        FlatSample fs;
        if (t >= duration_) {
            fs.p = segments_.back().start + segments_.back().delta;
            return fs;
        }
        size_t lo = 0, hi = segments_.size();
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            if (segments_[mid].t0 <= t) lo = mid;
            else hi = mid;
        }
        const Segment& sg = segments_[lo];
        const double x = std::clamp((t - sg.t0) / sg.T, 0.0, 1.0);
        double s[5];
        smoothstep7(x, s);
        fs.p = sg.start + s[0] * sg.delta;
        fs.v = (s[1] / sg.T) * sg.delta;
        fs.a = (s[2] / (sg.T * sg.T)) * sg.delta;
        fs.j = (s[3] / (sg.T * sg.T * sg.T)) * sg.delta;
        fs.s = (s[4] / (sg.T * sg.T * sg.T * sg.T)) * sg.delta;
        return fs;
    }

  private:
    std::vector<Segment> segments_;
    double max_speed_;
    double duration_;
};

} // namespace

std::unique_ptr<FlatTrajectory> make_random_waypoints(const RandomWaypointParams& params) {
    if (params.bbox_size.x <= 0.0 || params.bbox_size.y <= 0.0 || params.bbox_size.z <= 0.0)
        throw std::invalid_argument("random_waypoints: bbox dimensions must be positive");
    if (!(params.speed_min > 0.0) || params.speed_max > 8.0 || params.speed_min > params.speed_max)
        throw std::invalid_argument("random_waypoints: speed range must lie within (0, 8]");
    if (!(params.total_duration > 0.0))
        throw std::invalid_argument("random_waypoints: total_duration must be positive");

    std::uint64_t rng = params.seed;
    auto uniform = [&rng]() { return (splitmix64(rng) >> 11) * 0x1.0p-53; };
    auto sample_point = [&]() {
        Vec3 p;
        for (int i = 0; i < 3; ++i)
            p[i] = params.bbox_center[i] + params.bbox_size[i] * (uniform() - 0.5);
        return p;
    };

    std::vector<Segment> segments;
    Vec3 prev = sample_point();
    double t0 = 0.0;
    while (t0 < params.total_duration) {
        Vec3 next = sample_point();
        // Degenerate hops make segment timing meaningless; redraw.
        while (norm(next - prev) < 0.1) next = sample_point();
        const double speed = params.speed_min + (params.speed_max - params.speed_min) * uniform();
        const double dist = norm(next - prev);
        // Rest-to-rest minimum-snap segment whose peak speed equals `speed`.
        const double T = kPeakRatio * dist / speed;
        segments.push_back({t0, T, prev, next - prev});
        t0 += T;
        prev = next;
    }
    return std::make_unique<WaypointTrajectory>(std::move(segments), params.speed_max);
}

} // namespace rfl
