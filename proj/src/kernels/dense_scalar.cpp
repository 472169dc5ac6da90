#include "rfl/kernels/dense.hpp"

namespace rfl::kernels {

namespace {

void matvec(const double* w, const double* x, const double* b, double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* wr = w + static_cast<size_t>(r) * cols;
        double acc = b ? b[r] : 0.0;
        for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

void matvec_t(const double* w, const double* dy, double* dx, int rows, int cols) {
    for (int c = 0; c < cols; ++c) dx[c] = 0.0;
    for (int r = 0; r < rows; ++r) {
        const double* wr = w + static_cast<size_t>(r) * cols;
        const double g = dy[r];
        for (int c = 0; c < cols; ++c) dx[c] += wr[c] * g;
    }
}

void rank1_acc(double* dw, const double* dy, const double* x, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        double* dwr = dw + static_cast<size_t>(r) * cols;
        const double g = dy[r];
        for (int c = 0; c < cols; ++c) dwr[c] += g * x[c];
    }
}

void leaky_relu(const double* x, double* y, int n, double alpha) {
    for (int i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : alpha * x[i];
}

void leaky_relu_grad(const double* x, const double* dy, double* dx, int n, double alpha) {
    for (int i = 0; i < n; ++i) dx[i] = dy[i] * (x[i] > 0.0 ? 1.0 : alpha);
}

void axpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

} // namespace

const DenseOps& scalar_ops() {
    static const DenseOps ops{matvec, matvec_t, rank1_acc, leaky_relu, leaky_relu_grad, axpy,
                              "scalar"};
    return ops;
}

} // namespace rfl::kernels
