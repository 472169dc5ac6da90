#include <cmath>
#include <stdexcept>

#include "rfl/kernels/dense.hpp"
#include "rfl/learning.hpp"

namespace rfl {

MlpModel MlpModel::create(const std::vector<int>& dims, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("MlpModel: need at least input and output dims");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("MlpModel: dims must be positive");
    MlpModel m;
    m.dims = dims;
    std::uint64_t rng = seed;
    auto uniform = [&rng]() { return (splitmix64(rng) >> 11) * 0x1.0p-53; };
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l], fan_out = dims[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::vector<double> w(static_cast<size_t>(fan_in) * fan_out);
        for (double& x : w) x = limit * (2.0 * uniform() - 1.0);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out, 0.0);
    }
    return m;
}

size_t MlpModel::parameter_count() const {
    size_t n = 0;
    for (size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

int MlpModel::max_width() const {
    int w = 0;
    for (int d : dims) w = std::max(w, d);
    return w;
}

void MlpModel::forward_normalized(const double* x, double* y) const {
    const auto& ops = kernels::active_ops();
    const int width = max_width();
    // Fixed roles: pre-activations land in buf_a, post-activations in buf_b,
    // so source and destination never alias.
    std::vector<double> buf_a(width), buf_b(width);
    const double* in = x;
    const int layers = layer_count();
    for (int l = 0; l < layers; ++l) {
        const int rows = dims[l + 1], cols = dims[l];
        ops.matvec(weights[l].data(), in, biases[l].data(), buf_a.data(), rows, cols);
        if (l + 1 < layers) {
            ops.leaky_relu(buf_a.data(), buf_b.data(), rows, leaky_alpha);
            in = buf_b.data();
        } else {
            for (int i = 0; i < rows; ++i) y[i] = buf_a[i];
        }
    }
}

Labels MlpModel::forward(const Features& features) const {
    if (dims.front() != kFeatureDim || dims.back() != kLabelDim)
        throw std::invalid_argument("MlpModel: physical-space pass needs 19 inputs / 6 outputs");
    if (stats.in_min.size() != kFeatureDim || stats.out_min.size() != kLabelDim)
        throw std::logic_error("MlpModel: normalization stats not set");
    double xn[kFeatureDim], yn[kLabelDim];
    stats.normalize_in(features.data(), xn);
    forward_normalized(xn, yn);
    Labels out;
    stats.denormalize_out(yn, out.data());
    return out;
}

ResidualEstimate MlpModel::predict(const Features& features, double t) const {
    const Labels y = forward(features);
    ResidualEstimate e;
    e.f_a = {y[0], y[1], y[2]};
    e.tau_a = {y[3], y[4], y[5]};
    e.source = ResidualSourceTag::nn;
    e.t = t;
    return e;
}

MlpGradients MlpGradients::zeros_like(const MlpModel& model) {
    MlpGradients g;
    for (size_t l = 0; l < model.weights.size(); ++l) {
        g.weights.emplace_back(model.weights[l].size(), 0.0);
        g.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return g;
}

void MlpGradients::clear() {
    for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

double mlp_backward(const MlpModel& model, const double* xn, const double* yn, int batch_size,
                    MlpGradients& grads) {
    if (batch_size <= 0) throw std::invalid_argument("mlp_backward: empty batch");
    const auto& ops = kernels::active_ops();
    const int layers = model.layer_count();
    const int in_dim = model.dims.front();
    const int out_dim = model.dims.back();

    // Per-layer scratch: pre-activations and post-activations for one sample.
    std::vector<std::vector<double>> pre(layers), post(layers + 1);
    post[0].resize(in_dim);
    for (int l = 0; l < layers; ++l) {
        pre[l].resize(model.dims[l + 1]);
        post[l + 1].resize(model.dims[l + 1]);
    }
    std::vector<double> delta(model.max_width()), delta_prev(model.max_width());

    const double inv_count = 1.0 / (static_cast<double>(batch_size) * out_dim);
    double loss = 0.0;
    for (int s = 0; s < batch_size; ++s) {
        const double* x = xn + static_cast<size_t>(s) * in_dim;
        const double* y = yn + static_cast<size_t>(s) * out_dim;
        std::copy(x, x + in_dim, post[0].begin());
        for (int l = 0; l < layers; ++l) {
            ops.matvec(model.weights[l].data(), post[l].data(), model.biases[l].data(),
                       pre[l].data(), model.dims[l + 1], model.dims[l]);
            if (l + 1 < layers)
                ops.leaky_relu(pre[l].data(), post[l + 1].data(), model.dims[l + 1],
                               model.leaky_alpha);
            else
                post[l + 1] = pre[l];
        }

        for (int o = 0; o < out_dim; ++o) {
            const double e = post[layers][o] - y[o];
            loss += std::fabs(e) * inv_count;
            delta[o] = e > 0.0 ? inv_count : (e < 0.0 ? -inv_count : 0.0);
        }

        for (int l = layers - 1; l >= 0; --l) {
            const int rows = model.dims[l + 1], cols = model.dims[l];
            ops.axpy(1.0, delta.data(), grads.biases[l].data(), rows);
            ops.rank1_acc(grads.weights[l].data(), delta.data(), post[l].data(), rows, cols);
            if (l > 0) {
                ops.matvec_t(model.weights[l].data(), delta.data(), delta_prev.data(), rows, cols);
                ops.leaky_relu_grad(pre[l - 1].data(), delta_prev.data(), delta.data(), cols,
                                    model.leaky_alpha);
            }
        }
    }
    return loss;
}

AdamState AdamState::zeros_like(const MlpModel& model) {
    AdamState s;
    for (size_t l = 0; l < model.weights.size(); ++l) {
        s.m_w.emplace_back(model.weights[l].size(), 0.0);
        s.v_w.emplace_back(model.weights[l].size(), 0.0);
        s.m_b.emplace_back(model.biases[l].size(), 0.0);
        s.v_b.emplace_back(model.biases[l].size(), 0.0);
    }
    return s;
}

void adam_step(MlpModel& model, AdamState& state, const MlpGradients& grads, double lr) {
    ++state.step;
    const double b1 = state.beta1, b2 = state.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    auto update = [&](std::vector<double>& p, std::vector<double>& m, std::vector<double>& v,
                      const std::vector<double>& g) {
        for (size_t i = 0; i < p.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            p[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    };
    for (int l = 0; l < model.layer_count(); ++l) {
        update(model.weights[l], state.m_w[l], state.v_w[l], grads.weights[l]);
        update(model.biases[l], state.m_b[l], state.v_b[l], grads.biases[l]);
    }
}

} // namespace rfl
