#include <cmath>
#include <stdexcept>

#include "rfl/trajectory.hpp"

namespace rfl {

namespace {

// Phase progress sigma(t): unit-rate cruise with smoothstep ramps at both
// ends, C^4 on [0, D]. sigma(D) = D - ramp.
struct PhaseWarp {
    double duration;
    double ramp;

    // out[0..4] = sigma and derivatives 1..4.
    void eval(double t, double out[5]) const {
        double s[5];
        if (t <= 0.0) {
            for (int i = 0; i < 5; ++i) out[i] = 0.0;
        } else if (t < ramp) {
            const double x = t / ramp;
            smoothstep7(x, s);
            out[0] = ramp * integral(x);
            for (int i = 1; i < 5; ++i) out[i] = s[i - 1] / std::pow(ramp, i - 1);
        } else if (t <= duration - ramp) {
            out[0] = 0.5 * ramp + (t - ramp);
            out[1] = 1.0;
            out[2] = out[3] = out[4] = 0.0;
        } else if (t < duration) {
            const double x = (duration - t) / ramp;
            smoothstep7(x, s);
            out[0] = (duration - ramp) - ramp * integral(x);
            out[1] = s[0];
            out[2] = -s[1] / ramp;
            out[3] = s[2] / (ramp * ramp);
            out[4] = -s[3] / (ramp * ramp * ramp);
        } else {
            out[0] = duration - ramp;
            out[1] = out[2] = out[3] = out[4] = 0.0;
        }
    }

    double total() const { return duration - ramp; }

    static double integral(double x) {
        const double x5 = std::pow(x, 5);
        return 7.0 * x5 - 14.0 * x5 * x + 10.0 * x5 * x * x - 2.5 * x5 * x * x * x;
    }
};

class ShapeTrajectory final : public FlatTrajectory {
  public:
    explicit ShapeTrajectory(const ShapeParams& params) : params_(params) {
        if (params.max_speed <= 0.0) throw std::invalid_argument("shape: max_speed must be > 0");
        if (params.duration <= 2.0 * params.ramp_time)
            throw std::invalid_argument("shape: duration must exceed twice the ramp time");
        const bool round = params.kind != ShapeKind::figure8;
        if ((round && params.radius <= 0.0) ||
            (!round && (params.fig8_x <= 0.0 || params.fig8_y <= 0.0)))
            throw std::invalid_argument("shape: dimensions must be positive");
        warp_ = {params.duration, params.ramp_time};
        if (params.kind == ShapeKind::helix) {
            const double vz = params.climb / warp_.total();
            if (params.max_speed <= std::fabs(vz) + 1e-9)
                throw std::invalid_argument("helix: max_speed too low for requested climb");
            // |dp/dtheta| = sqrt(r^2 + kz^2), kz = climb / (Omega * total).
            omega_ = std::sqrt(params.max_speed * params.max_speed - vz * vz) / params.radius;
            kz_ = params.climb / (omega_ * warp_.total());
        } else {
            omega_ = params.max_speed / max_curve_speed();
        }
    }

    double duration() const override { return params_.duration; }
    double max_speed() const override { return params_.max_speed; }
    std::string name() const override { return to_string(params_.kind); }

    FlatSample sample(double t) const override {
        double sg[5];
        warp_.eval(t, sg);
        const double theta = omega_ * sg[0];
        const double d1 = omega_ * sg[1], d2 = omega_ * sg[2], d3 = omega_ * sg[3],
                     d4 = omega_ * sg[4];
        Vec3 c[5];
        curve(theta, c);
        FlatSample fs;
        fs.p = c[0];
        fs.v = d1 * c[1];
        fs.a = d1 * d1 * c[2] + d2 * c[1];
        fs.j = d1 * d1 * d1 * c[3] + 3.0 * d1 * d2 * c[2] + d3 * c[1];
        fs.s = d1 * d1 * d1 * d1 * c[4] + 6.0 * d1 * d1 * d2 * c[3] +
               (3.0 * d2 * d2 + 4.0 * d1 * d3) * c[2] + d4 * c[1];
        return fs;
    }

  private:
    // c[n] = d^n p / d theta^n.
    void curve(double theta, Vec3 c[5]) const {
        const double ct = std::cos(theta), st = std::sin(theta);
        switch (params_.kind) {
            case ShapeKind::circle:
            case ShapeKind::helix: {
                const double r = params_.radius;
                c[0] = params_.center + Vec3{r * ct, r * st, 0.0};
                c[1] = {-r * st, r * ct, 0.0};
                c[2] = {-r * ct, -r * st, 0.0};
                c[3] = {r * st, -r * ct, 0.0};
                c[4] = {r * ct, r * st, 0.0};
                if (params_.kind == ShapeKind::helix) {
                    c[0].z += kz_ * theta;
                    c[1].z += kz_;
                }
                break;
            }
            case ShapeKind::figure8: {
                const double a = params_.fig8_x, b = params_.fig8_y;
                const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
                c[0] = params_.center + Vec3{a * st, b * s2, 0.0};
                c[1] = {a * ct, 2.0 * b * c2, 0.0};
                c[2] = {-a * st, -4.0 * b * s2, 0.0};
                c[3] = {-a * ct, -8.0 * b * c2, 0.0};
                c[4] = {a * st, 16.0 * b * s2, 0.0};
                break;
            }
        }
    }

    double max_curve_speed() const {
        Vec3 c[5];
        double best = 0.0;
        for (int i = 0; i < 4096; ++i) {
            curve(2.0 * M_PI * i / 4096.0, c);
            best = std::max(best, norm(c[1]));
        }
        return best;
    }

    ShapeParams params_;
    PhaseWarp warp_{};
    double omega_ = 0.0;
    double kz_ = 0.0;
};

} // namespace

std::unique_ptr<FlatTrajectory> make_shape(const ShapeParams& params) {
    return std::make_unique<ShapeTrajectory>(params);
}

} // namespace rfl
