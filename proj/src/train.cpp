#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rfl/csv.hpp"
#include "rfl/learning.hpp"

namespace rfl {

TrainConfig TrainConfig::from_config(const Config& cfg) {
    TrainConfig c;
    c.lr0 = cfg.get_double("train.lr0", c.lr0);
    c.decay = cfg.get_double("train.decay", c.decay);
    c.decay_every = cfg.get_int("train.decay_every", c.decay_every);
    c.epochs = cfg.get_int("train.epochs", c.epochs);
    c.batch_size = cfg.get_int("train.batch_size", c.batch_size);
    c.val_fraction = cfg.get_double("train.val_fraction", c.val_fraction);
    const auto hidden = cfg.get_list("train.hidden");
    if (!hidden.empty()) {
        c.hidden.clear();
        for (double h : hidden) c.hidden.push_back(static_cast<int>(h));
    }
    if (!(c.lr0 > 0.0) || !(c.decay > 0.0 && c.decay < 1.0) || c.decay_every <= 0 ||
        c.epochs <= 0 || c.batch_size <= 0)
        throw std::runtime_error("train config: invalid schedule parameters");
    return c;
}

double TrainConfig::lr_at(int epoch) const {
    return lr0 * std::pow(decay, static_cast<double>(epoch / decay_every));
}

namespace {

double evaluate_loss(const MlpModel& model, const double* xn, const double* yn, size_t count) {
    if (count == 0) return 0.0;
    const int in_dim = model.dims.front(), out_dim = model.dims.back();
    std::vector<double> pred(out_dim);
    double loss = 0.0;
    for (size_t s = 0; s < count; ++s) {
        model.forward_normalized(xn + s * in_dim, pred.data());
        for (int o = 0; o < out_dim; ++o)
            loss += std::fabs(pred[o] - yn[s * out_dim + o]);
    }
    return loss / (static_cast<double>(count) * out_dim);
}

} // namespace

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
    if (dataset.size() == 0) throw std::invalid_argument("train: empty dataset");
    for (const auto& f : dataset.features)
        for (double v : f)
            if (!std::isfinite(v)) throw std::invalid_argument("train: non-finite feature");
    for (const auto& l : dataset.labels)
        for (double v : l)
            if (!std::isfinite(v)) throw std::invalid_argument("train: non-finite label");

    std::vector<int> dims{kFeatureDim};
    for (int h : config.hidden) dims.push_back(h);
    dims.push_back(kLabelDim);
    MlpModel model = MlpModel::create(dims, config.seed);
    model.stats = dataset.stats;

    // Normalize everything once; validation is the trailing contiguous block.
    const size_t n = dataset.size();
    const size_t n_val = std::min(n - 1, static_cast<size_t>(std::floor(n * config.val_fraction)));
    const size_t n_train = n - n_val;
    std::vector<double> xn(n * kFeatureDim), yn(n * kLabelDim);
    for (size_t s = 0; s < n; ++s) {
        model.stats.normalize_in(dataset.features[s].data(), xn.data() + s * kFeatureDim);
        model.stats.normalize_out(dataset.labels[s].data(), yn.data() + s * kLabelDim);
    }

    AdamState adam = AdamState::zeros_like(model);
    MlpGradients grads = MlpGradients::zeros_like(model);
    std::vector<size_t> order(n_train);
    std::iota(order.begin(), order.end(), size_t{0});
    std::uint64_t rng = config.seed ^ 0x5DEECE66DULL;

    std::vector<double> batch_x(static_cast<size_t>(config.batch_size) * kFeatureDim);
    std::vector<double> batch_y(static_cast<size_t>(config.batch_size) * kLabelDim);

    TrainResult result;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = config.lr_at(epoch);
        // Fisher-Yates with the seeded stream; identical seeds give identical
        // epoch orderings.
        for (size_t i = n_train; i > 1; --i) {
            const size_t j = splitmix64(rng) % i;
            std::swap(order[i - 1], order[j]);
        }
        double epoch_loss = 0.0;
        size_t seen = 0;
        for (size_t start = 0; start < n_train; start += config.batch_size) {
            const int bs = static_cast<int>(std::min<size_t>(config.batch_size, n_train - start));
            for (int b = 0; b < bs; ++b) {
                const size_t s = order[start + b];
                std::copy_n(xn.data() + s * kFeatureDim, kFeatureDim,
                            batch_x.data() + static_cast<size_t>(b) * kFeatureDim);
                std::copy_n(yn.data() + s * kLabelDim, kLabelDim,
                            batch_y.data() + static_cast<size_t>(b) * kLabelDim);
            }
            grads.clear();
            const double loss = mlp_backward(model, batch_x.data(), batch_y.data(), bs, grads);
            if (!std::isfinite(loss)) throw std::runtime_error("train: non-finite loss");
            adam_step(model, adam, grads, lr);
            epoch_loss += loss * bs;
            seen += bs;
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = lr;
        rec.train_loss = epoch_loss / static_cast<double>(seen);
        rec.val_loss = evaluate_loss(model, xn.data() + n_train * kFeatureDim,
                                     yn.data() + n_train * kLabelDim, n_val);
        result.history.push_back(rec);
    }
    result.model = std::move(model);
    return result;
}

void write_training_report_csv(const std::vector<EpochRecord>& history, const std::string& path) {
    CsvWriter w(path);
    w.write_row({"epoch", "lr", "train_loss", "val_loss"});
    for (const auto& r : history)
        w.write_row({std::to_string(r.epoch), format_double(r.lr), format_double(r.train_loss),
                     format_double(r.val_loss)});
}

} // namespace rfl
