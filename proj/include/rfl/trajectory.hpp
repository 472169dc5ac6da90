#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rfl/config.hpp"
#include "rfl/mat3.hpp"
#include "rfl/vec3.hpp"

namespace rfl {

// Position reference and its time derivatives at one instant.
struct FlatSample {
    Vec3 p, v, a, j, s; // position .. snap
    double yaw = 0.0;
    double yaw_rate = 0.0;
};

// Smooth position reference with derivatives up to 4th order on [0, D].
// Evaluation is read-only and thread-safe.
class FlatTrajectory {
  public:
    virtual ~FlatTrajectory() = default;
    virtual double duration() const = 0;
    virtual FlatSample sample(double t) const = 0;
    virtual double max_speed() const = 0;
    virtual std::string name() const = 0;
};

enum class ShapeKind { figure8, circle, helix };

ShapeKind shape_kind_from_string(const std::string& name);
std::string to_string(ShapeKind kind);

struct ShapeParams {
    ShapeKind kind = ShapeKind::figure8;
    Vec3 center{0.0, 0.0, 1.0};
    double radius = 0.75;    // circle/helix radius, m
    double fig8_x = 1.0;     // figure8 half-width, m
    double fig8_y = 0.5;     // figure8 half-height, m
    double climb = 0.8;      // helix total climb, m
    double max_speed = 1.7;  // m/s
    double duration = 14.0;  // s
    double ramp_time = 1.5;  // s

    static ShapeParams from_config(const Config& cfg, ShapeKind kind, bool payload);
};

// Closed-form test shape with smooth speed ramp-in/out; start and end at rest.
std::unique_ptr<FlatTrajectory> make_shape(const ShapeParams& params);

struct RandomWaypointParams {
    Vec3 bbox_center{0.0, 0.0, 1.0};
    Vec3 bbox_size{1.6, 1.6, 0.4}; // m
    double speed_min = 1.0;        // m/s
    double speed_max = 8.0;        // m/s
    double total_duration = 60.0;  // s
    std::uint64_t seed = 0;

    static RandomWaypointParams from_config(const Config& cfg);
};

// Stop-and-go minimum-snap segments between uniformly sampled waypoints; each
// segment's peak speed is drawn uniformly from [speed_min, speed_max].
std::unique_ptr<FlatTrajectory> make_random_waypoints(const RandomWaypointParams& params);

// Full state reference obtained from the flatness map.
struct FullReference {
    Vec3 p, v, a;
    Mat3 R = Mat3::identity();
    Vec3 omega;
    Vec3 omega_dot;
};

// Differential-flatness expansion at time t. Throws std::domain_error for the
// singular free-fall reference (|pddot + g e_z| < 1e-6).
FullReference flat_expand(const FlatTrajectory& traj, double t, double gravity);
FullReference flat_expand(const FlatSample& fs, double gravity);

// CSV export/import: t, p(3), v(3), a(3), jerk(3), snap(3), yaw.
void export_trajectory_csv(const FlatTrajectory& traj, double dt, const std::string& path);
std::unique_ptr<FlatTrajectory> import_trajectory_csv(const std::string& path);

// 7th-order smoothstep basis used by the ramps and min-snap segments:
// value and first four derivatives at x in [0, 1].
void smoothstep7(double x, double out[5]);

} // namespace rfl
