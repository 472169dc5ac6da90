#include "rfl/residual_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace rfl {

ResidualModel ResidualModel::none() { return {}; }

ResidualModel ResidualModel::linear_drag(const Mat3& drag, const Mat3& ang_drag) {
    ResidualModel m;
    m.kind_ = Kind::linear_drag;
    m.drag_ = drag;
    m.ang_drag_ = ang_drag;
    return m;
}

ResidualModel ResidualModel::quadratic_drag(const Mat3& drag, const Mat3& ang_drag) {
    ResidualModel m;
    m.kind_ = Kind::quadratic_drag;
    m.drag_ = drag;
    m.ang_drag_ = ang_drag;
    return m;
}

ResidualModel ResidualModel::scripted(std::vector<Entry> series) {
    ResidualModel m;
    m.kind_ = Kind::scripted;
    m.series_ = std::move(series);
    std::sort(m.series_.begin(), m.series_.end(),
              [](const Entry& a, const Entry& b) { return a.t < b.t; });
    return m;
}

ResidualModel ResidualModel::from_config(const Config& cfg) {
    const std::string kind = cfg.get_string("residual.kind", "none");
    const Vec3 d = cfg.get_vec3("residual.drag_diag", {0, 0, 0});
    const Vec3 ad = cfg.get_vec3("residual.ang_drag_diag", {0, 0, 0});
    if (kind == "none") return none();
    if (kind == "linear_drag") return linear_drag(Mat3::diag(d), Mat3::diag(ad));
    if (kind == "quadratic_drag") return quadratic_drag(Mat3::diag(d), Mat3::diag(ad));
    if (kind == "scripted") {
        // residual.script = t0,fx,fy,fz,tx,ty,tz, t1,...
        const auto flat = cfg.get_list("residual.script");
        if (flat.empty() || flat.size() % 7 != 0)
            throw std::runtime_error("residual config: script needs groups of 7 values");
        std::vector<Entry> series;
        for (size_t i = 0; i + 6 < flat.size(); i += 7)
            series.push_back({flat[i],
                              {flat[i + 1], flat[i + 2], flat[i + 3]},
                              {flat[i + 4], flat[i + 5], flat[i + 6]}});
        return scripted(std::move(series));
    }
    throw std::runtime_error("residual config: unknown kind '" + kind + "'");
}

std::pair<Vec3, Vec3> ResidualModel::eval(const VehicleState& state, double t) const {
    switch (kind_) {
        case Kind::none:
            return {Vec3{}, Vec3{}};
        case Kind::linear_drag:
            return {-(drag_ * state.v), -(ang_drag_ * state.omega)};
        case Kind::quadratic_drag:
            return {-norm(state.v) * (drag_ * state.v),
                    -norm(state.omega) * (ang_drag_ * state.omega)};
        case Kind::scripted: {
            Vec3 f, tau;
            for (const Entry& e : series_) {
                if (e.t > t) break;
                f = e.f;
                tau = e.tau;
            }
            return {f, tau};
        }
    }
    return {Vec3{}, Vec3{}};
}

} // namespace rfl
