#pragma once

#include <utility>
#include <vector>

#include "rfl/config.hpp"
#include "rfl/vehicle.hpp"

namespace rfl {

// Ground-truth source of the unmodeled force/torque injected into the
// simulated dynamics.
class ResidualModel {
  public:
    enum class Kind { none, linear_drag, quadratic_drag, scripted };

    struct Entry {
        double t = 0.0;
        Vec3 f;
        Vec3 tau;
    };

    ResidualModel() = default;

    static ResidualModel none();
    static ResidualModel linear_drag(const Mat3& drag, const Mat3& ang_drag = Mat3{});
    static ResidualModel quadratic_drag(const Mat3& drag, const Mat3& ang_drag = Mat3{});
    // Piecewise-constant time series (values held from each entry's t onward).
    static ResidualModel scripted(std::vector<Entry> series);

    static ResidualModel from_config(const Config& cfg);

    Kind kind() const { return kind_; }

    // (f_a, tau_a) in world N / body N*m; deterministic in (state, t).
    std::pair<Vec3, Vec3> eval(const VehicleState& state, double t) const;

  private:
    Kind kind_ = Kind::none;
    Mat3 drag_;
    Mat3 ang_drag_;
    std::vector<Entry> series_;
};

} // namespace rfl
