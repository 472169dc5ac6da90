#pragma once

#include <cstddef>
#include <string>

namespace rfl::kernels {

// Dense-layer primitives behind the MLP forward/backward passes. Each backend
// provides the same contract; results may differ by accumulation rounding
// only. Within one process the selected backend is fixed, so repeated runs
// are bitwise reproducible.
struct DenseOps {
    // y[r] = b[r] + sum_c w[r*cols + c] * x[c]
    void (*matvec)(const double* w, const double* x, const double* b, double* y, int rows,
                   int cols);
    // dx[c] = sum_r w[r*cols + c] * dy[r]
    void (*matvec_t)(const double* w, const double* dy, double* dx, int rows, int cols);
    // dw[r*cols + c] += dy[r] * x[c]
    void (*rank1_acc)(double* dw, const double* dy, const double* x, int rows, int cols);
    // y[i] = x[i] > 0 ? x[i] : alpha * x[i]
    void (*leaky_relu)(const double* x, double* y, int n, double alpha);
    // dx[i] = dy[i] * (x[i] > 0 ? 1 : alpha)
    void (*leaky_relu_grad)(const double* x, const double* dy, double* dx, int n, double alpha);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, int n);

    const char* name;
};

enum class Backend { scalar, avx2, automatic };

const DenseOps& scalar_ops();
bool avx2_available();
const DenseOps& avx2_ops(); // throws std::runtime_error if unavailable

// Process-wide selection; `automatic` picks the widest supported backend.
void select_backend(Backend backend);
const DenseOps& active_ops();
std::string active_backend_name();

} // namespace rfl::kernels
