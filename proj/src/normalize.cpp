#include <limits>
#include <stdexcept>

#include "rfl/learning.hpp"

namespace rfl {

NormStats NormStats::compute(const std::vector<Features>& features,
                             const std::vector<Labels>& labels) {
    if (features.empty() || features.size() != labels.size())
        throw std::invalid_argument("NormStats: empty or mismatched feature/label sets");
    NormStats s;
    const double inf = std::numeric_limits<double>::infinity();
    s.in_min.assign(kFeatureDim, inf);
    s.in_max.assign(kFeatureDim, -inf);
    s.out_min.assign(kLabelDim, inf);
    s.out_max.assign(kLabelDim, -inf);
    for (const auto& f : features)
        for (int i = 0; i < kFeatureDim; ++i) {
            s.in_min[i] = std::min(s.in_min[i], f[i]);
            s.in_max[i] = std::max(s.in_max[i], f[i]);
        }
    for (const auto& l : labels)
        for (int i = 0; i < kLabelDim; ++i) {
            s.out_min[i] = std::min(s.out_min[i], l[i]);
            s.out_max[i] = std::max(s.out_max[i], l[i]);
        }
    return s;
}

namespace {

inline double norm_one(double x, double lo, double hi) {
    if (!(hi > lo)) return 0.0; // constant dimension
    return 2.0 * (x - lo) / (hi - lo) - 1.0;
}

inline double denorm_one(double xn, double lo, double hi) {
    if (!(hi > lo)) return lo;
    return lo + 0.5 * (xn + 1.0) * (hi - lo);
}

} // namespace

void NormStats::normalize_in(const double* x, double* out) const {
    for (size_t i = 0; i < in_min.size(); ++i) out[i] = norm_one(x[i], in_min[i], in_max[i]);
}

void NormStats::normalize_out(const double* y, double* out) const {
    for (size_t i = 0; i < out_min.size(); ++i) out[i] = norm_one(y[i], out_min[i], out_max[i]);
}

void NormStats::denormalize_out(const double* yn, double* out) const {
    for (size_t i = 0; i < out_min.size(); ++i) out[i] = denorm_one(yn[i], out_min[i], out_max[i]);
}

} // namespace rfl
