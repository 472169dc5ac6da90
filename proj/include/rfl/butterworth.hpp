#pragma once

#include <array>

#include "rfl/vec3.hpp"

namespace rfl {

// Second-order low-pass Butterworth biquad (bilinear transform with frequency
// prewarping, so the -3 dB point lands exactly on the cutoff). The filter
// seeds its state from the first sample, so constant inputs pass through with
// no startup transient.
class Butterworth2 {
  public:
    Butterworth2() = default;
    Butterworth2(double cutoff_hz, double sample_rate_hz);

    double step(double x);
    void reset();

    double cutoff_hz() const { return cutoff_hz_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    // Envelope time constant of the dominant pole pair, 1/(zeta*omega_c).
    double time_constant() const;

    double b0() const { return b0_; }
    double b1() const { return b1_; }
    double b2() const { return b2_; }
    double a1() const { return a1_; }
    double a2() const { return a2_; }

  private:
    double cutoff_hz_ = 0.0, sample_rate_hz_ = 0.0;
    double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
    double s1_ = 0.0, s2_ = 0.0; // direct form II transposed
    bool primed_ = false;
};

template <int N>
class ButterworthBank {
  public:
    ButterworthBank() = default;
    ButterworthBank(double cutoff_hz, double sample_rate_hz) {
        for (auto& ch : channels_) ch = Butterworth2(cutoff_hz, sample_rate_hz);
    }
    void reset() {
        for (auto& ch : channels_) ch.reset();
    }
    std::array<double, N> step(const std::array<double, N>& x) {
        std::array<double, N> y{};
        for (int i = 0; i < N; ++i) y[i] = channels_[i].step(x[i]);
        return y;
    }

  private:
    std::array<Butterworth2, N> channels_{};
};

class ButterworthVec3 {
  public:
    ButterworthVec3() = default;
    ButterworthVec3(double cutoff_hz, double sample_rate_hz) : bank_(cutoff_hz, sample_rate_hz) {}
    void reset() { bank_.reset(); }
    Vec3 step(const Vec3& x) {
        const auto y = bank_.step({x.x, x.y, x.z});
        return {y[0], y[1], y[2]};
    }

  private:
    ButterworthBank<3> bank_;
};

} // namespace rfl
