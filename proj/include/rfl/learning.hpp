#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rfl/config.hpp"
#include "rfl/flight_log.hpp"
#include "rfl/sim.hpp"
#include "rfl/vehicle.hpp"

namespace rfl {

inline constexpr int kFeatureDim = 19;
inline constexpr int kLabelDim = 6;

using Features = std::array<double, kFeatureDim>;
using Labels = std::array<double, kLabelDim>;

extern const std::array<std::string, kFeatureDim> kFeatureNames;
extern const std::array<std::string, kLabelDim> kLabelNames;

// Fixed ordering: v, vdot, omega, first two columns of R, motor PWM. The
// frame's accel/gyro channels are expected to be the filtered values used in
// the inversion pipeline.
Features build_features(const VehicleState& state, const SensorFrame& frame, double gravity);

// Per-dimension min-max statistics mapping to [-1, 1]. Constant dimensions
// are mapped to 0.
struct NormStats {
    std::vector<double> in_min, in_max, out_min, out_max;

    static NormStats compute(const std::vector<Features>& features,
                             const std::vector<Labels>& labels);

    void normalize_in(const double* x, double* out) const;
    void normalize_out(const double* y, double* out) const;
    void denormalize_out(const double* yn, double* out) const;
};

struct MlpModel {
    std::vector<int> dims; // {19, hidden..., 6}
    std::vector<std::vector<double>> weights; // [layer], row-major out x in
    std::vector<std::vector<double>> biases;  // [layer]
    double leaky_alpha = 0.01;
    NormStats stats;

    static MlpModel create(const std::vector<int>& dims, std::uint64_t seed);

    int layer_count() const { return static_cast<int>(weights.size()); }
    size_t parameter_count() const;
    int max_width() const;

    // Normalized-space pass; x has dims.front() entries, y dims.back().
    void forward_normalized(const double* x, double* y) const;
    // Physical-space pass: normalize -> network -> denormalize.
    Labels forward(const Features& features) const;
    ResidualEstimate predict(const Features& features, double t) const;
};

struct MlpGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static MlpGradients zeros_like(const MlpModel& model);
    void clear();
};

// Mean L1 loss over the batch in normalized space and its gradients.
// Subgradient at exactly zero residual is zero. xn/yn are row-major
// batch_size x in/out.
double mlp_backward(const MlpModel& model, const double* xn, const double* yn, int batch_size,
                    MlpGradients& grads);

struct AdamState {
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
    long step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    static AdamState zeros_like(const MlpModel& model);
};

void adam_step(MlpModel& model, AdamState& state, const MlpGradients& grads, double lr);

struct TrainConfig {
    double lr0 = 3e-4;
    double decay = 0.92;
    int decay_every = 10;
    int epochs = 128;
    int batch_size = 512;
    double val_fraction = 0.1;
    std::vector<int> hidden{24, 24, 24};
    std::uint64_t seed = 0;

    static TrainConfig from_config(const Config& cfg);
    double lr_at(int epoch) const;
};

struct Dataset {
    std::vector<Features> features;
    std::vector<Labels> labels;
    std::vector<double> t;
    std::vector<int> log_id;
    NormStats stats;

    size_t size() const { return features.size(); }
};

struct EpochRecord {
    int epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    MlpModel model;
    std::vector<EpochRecord> history;
};

TrainResult train(const Dataset& dataset, const TrainConfig& config);

void write_training_report_csv(const std::vector<EpochRecord>& history, const std::string& path);

enum class LabelMode { spline_smoothed, raw };

// Builds training samples from flight logs: features from the logged filtered
// channels, labels from the per-log spline smoothing of the inversion
// estimates (or the raw estimates). Streams must be uniform in time.
Dataset make_dataset(const std::vector<FlightLog>& logs, double knot_spacing,
                     LabelMode mode = LabelMode::spline_smoothed);

void save_dataset_csv(const Dataset& dataset, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

} // namespace rfl
