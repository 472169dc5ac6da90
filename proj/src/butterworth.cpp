#include "rfl/butterworth.hpp"

#include <cmath>
#include <stdexcept>

namespace rfl {

Butterworth2::Butterworth2(double cutoff_hz, double sample_rate_hz)
    : cutoff_hz_(cutoff_hz), sample_rate_hz_(sample_rate_hz) {
    if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 0.0) || cutoff_hz >= 0.5 * sample_rate_hz)
        throw std::invalid_argument("Butterworth2: need 0 < cutoff < sample_rate/2");
    const double k = std::tan(M_PI * cutoff_hz / sample_rate_hz);
    const double q = 1.0 / std::sqrt(2.0);
    const double norm = 1.0 / (1.0 + k / q + k * k);
    b0_ = k * k * norm;
    b1_ = 2.0 * b0_;
    b2_ = b0_;
    a1_ = 2.0 * (k * k - 1.0) * norm;
    a2_ = (1.0 - k / q + k * k) * norm;
}

void Butterworth2::reset() {
    s1_ = s2_ = 0.0;
    primed_ = false;
}

double Butterworth2::step(double x) {
    if (!primed_) {
        // Steady state for constant input x, so y = x from the first sample.
        s1_ = (1.0 - b0_) * x;
        s2_ = (b2_ - a2_) * x;
        primed_ = true;
    }
    const double y = b0_ * x + s1_;
    s1_ = b1_ * x - a1_ * y + s2_;
    s2_ = b2_ * x - a2_ * y;
    return y;
}

double Butterworth2::time_constant() const {
    const double zeta = 1.0 / std::sqrt(2.0);
    return 1.0 / (zeta * 2.0 * M_PI * cutoff_hz_);
}

} // namespace rfl
