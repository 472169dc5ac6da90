#include "rfl/kernels/dense.hpp"

#include <immintrin.h>

// 4-wide double kernels (AVX2 + FMA). Tails are handled scalar; the in-lane
// accumulator order is fixed, so results are deterministic per backend.

namespace rfl::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(sum2, sum2);
    return _mm_cvtsd_f64(_mm_add_sd(sum2, swapped));
}

void matvec(const double* w, const double* x, const double* b, double* y, int rows, int cols) {
    const int tail = cols & 3;
    const int main = cols - tail;
    for (int r = 0; r < rows; ++r) {
        const double* wr = w + static_cast<size_t>(r) * cols;
        __m256d acc = _mm256_setzero_pd();
        for (int c = 0; c < main; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wr + c), _mm256_loadu_pd(x + c), acc);
        double s = hsum(acc);
        for (int c = main; c < cols; ++c) s += wr[c] * x[c];
        y[r] = (b ? b[r] : 0.0) + s;
    }
}

void matvec_t(const double* w, const double* dy, double* dx, int rows, int cols) {
    const int tail = cols & 3;
    const int main = cols - tail;
    for (int c = 0; c < main; c += 4) _mm256_storeu_pd(dx + c, _mm256_setzero_pd());
    for (int c = main; c < cols; ++c) dx[c] = 0.0;
    for (int r = 0; r < rows; ++r) {
        const double* wr = w + static_cast<size_t>(r) * cols;
        const __m256d g = _mm256_set1_pd(dy[r]);
        for (int c = 0; c < main; c += 4) {
            const __m256d acc =
                _mm256_fmadd_pd(_mm256_loadu_pd(wr + c), g, _mm256_loadu_pd(dx + c));
            _mm256_storeu_pd(dx + c, acc);
        }
        for (int c = main; c < cols; ++c) dx[c] += wr[c] * dy[r];
    }
}

void rank1_acc(double* dw, const double* dy, const double* x, int rows, int cols) {
    const int tail = cols & 3;
    const int main = cols - tail;
    for (int r = 0; r < rows; ++r) {
        double* dwr = dw + static_cast<size_t>(r) * cols;
        const __m256d g = _mm256_set1_pd(dy[r]);
        for (int c = 0; c < main; c += 4) {
            const __m256d acc = _mm256_fmadd_pd(g, _mm256_loadu_pd(x + c), _mm256_loadu_pd(dwr + c));
            _mm256_storeu_pd(dwr + c, acc);
        }
        for (int c = main; c < cols; ++c) dwr[c] += dy[r] * x[c];
    }
}

void leaky_relu(const double* x, double* y, int n, double alpha) {
    const int tail = n & 3;
    const int main = n - tail;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d a = _mm256_set1_pd(alpha);
    for (int i = 0; i < main; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d mask = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(y + i, _mm256_blendv_pd(_mm256_mul_pd(a, v), v, mask));
    }
    for (int i = main; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : alpha * x[i];
}

void leaky_relu_grad(const double* x, const double* dy, double* dx, int n, double alpha) {
    const int tail = n & 3;
    const int main = n - tail;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d a = _mm256_set1_pd(alpha);
    const __m256d one = _mm256_set1_pd(1.0);
    for (int i = 0; i < main; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d mask = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
        const __m256d slope = _mm256_blendv_pd(a, one, mask);
        _mm256_storeu_pd(dx + i, _mm256_mul_pd(_mm256_loadu_pd(dy + i), slope));
    }
    for (int i = main; i < n; ++i) dx[i] = dy[i] * (x[i] > 0.0 ? 1.0 : alpha);
}

void axpy(double a, const double* x, double* y, int n) {
    const int tail = n & 3;
    const int main = n - tail;
    const __m256d av = _mm256_set1_pd(a);
    for (int i = 0; i < main; i += 4) {
        const __m256d acc = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, acc);
    }
    for (int i = main; i < n; ++i) y[i] += a * x[i];
}

} // namespace

const DenseOps& avx2_ops_impl() {
    static const DenseOps ops{matvec, matvec_t, rank1_acc, leaky_relu, leaky_relu_grad, axpy,
                              "avx2"};
    return ops;
}

} // namespace rfl::kernels
