#include "rfl/trajectory.hpp"

#include <stdexcept>

namespace rfl {

ShapeKind shape_kind_from_string(const std::string& name) {
    if (name == "figure8") return ShapeKind::figure8;
    if (name == "circle") return ShapeKind::circle;
    if (name == "helix") return ShapeKind::helix;
    throw std::invalid_argument("unknown trajectory shape '" + name + "'");
}

std::string to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::figure8: return "figure8";
        case ShapeKind::circle: return "circle";
        case ShapeKind::helix: return "helix";
    }
    return "?";
}

ShapeParams ShapeParams::from_config(const Config& cfg, ShapeKind kind, bool payload) {
    ShapeParams p;
    p.kind = kind;
    const std::string k = "trajectory." + to_string(kind) + ".";
    p.center = cfg.get_vec3("trajectory.center", p.center);
    p.radius = cfg.get_double(k + "radius", p.radius);
    p.fig8_x = cfg.get_double(k + "half_width", p.fig8_x);
    p.fig8_y = cfg.get_double(k + "half_height", p.fig8_y);
    p.climb = cfg.get_double(k + "climb", p.climb);
    p.ramp_time = cfg.get_double("trajectory.ramp_time", p.ramp_time);
    // Test speeds: 1.7/1.7/1.6 m/s without payload, 1.2/1.0/1.0 m/s with.
    double def_speed = 1.7, def_duration = 14.0;
    switch (kind) {
        case ShapeKind::figure8: def_speed = payload ? 1.2 : 1.7; break;
        case ShapeKind::circle: def_speed = payload ? 1.0 : 1.7; def_duration = 12.0; break;
        case ShapeKind::helix: def_speed = payload ? 1.0 : 1.6; def_duration = 16.0; break;
    }
    const std::string suffix = payload ? ".payload" : "";
    p.max_speed = cfg.get_double(k + "max_speed" + suffix, def_speed);
    p.duration = cfg.get_double(k + "duration", def_duration);
    return p;
}

RandomWaypointParams RandomWaypointParams::from_config(const Config& cfg) {
    RandomWaypointParams p;
    p.bbox_center = cfg.get_vec3("collect.bbox_center", p.bbox_center);
    p.bbox_size = cfg.get_vec3("collect.bbox_size", p.bbox_size);
    p.speed_min = cfg.get_double("collect.speed_min", p.speed_min);
    p.speed_max = cfg.get_double("collect.speed_max", p.speed_max);
    p.total_duration = cfg.get_double("collect.flight_duration", p.total_duration);
    return p;
}

void smoothstep7(double x, double out[5]) {
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x, x7 = x6 * x;
    out[0] = 35.0 * x4 - 84.0 * x5 + 70.0 * x6 - 20.0 * x7;
    out[1] = 140.0 * x3 - 420.0 * x4 + 420.0 * x5 - 140.0 * x6;
    out[2] = 420.0 * x2 - 1680.0 * x3 + 2100.0 * x4 - 840.0 * x5;
    out[3] = 840.0 * x - 5040.0 * x2 + 8400.0 * x3 - 4200.0 * x4;
    out[4] = 840.0 - 10080.0 * x + 25200.0 * x2 - 16800.0 * x3;
}

} // namespace rfl
