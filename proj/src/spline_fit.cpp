#include "rfl/spline_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace rfl {

namespace bspline {

std::vector<double> clamped_knots(double t0, double t1, int segments) {
    std::vector<double> u(segments + 7);
    const double h = (t1 - t0) / segments;
    for (int i = 0; i < 4; ++i) u[i] = t0;
    for (int i = 1; i < segments; ++i) u[3 + i] = t0 + h * i;
    for (int i = 0; i < 4; ++i) u[segments + 3 + i] = t1;
    return u;
}

int find_span(const std::vector<double>& knots, double x) {
    const int n = static_cast<int>(knots.size());
    int lo = 3, hi = n - 5; // valid spans [3, n-5]
    if (x <= knots[lo]) return lo;
    if (x >= knots[hi + 1]) return hi;
    while (hi - lo > 0) {
        const int mid = (lo + hi + 1) / 2;
        if (knots[mid] <= x) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

// "DersBasisFuns" for degree 3 (The NURBS Book, A2.3).
void basis_ders(const std::vector<double>& knots, int span, double x, int nders,
                double ders[4][4]) {
    constexpr int p = 3;
    double ndu[p + 1][p + 1];
    double left[p + 1], right[p + 1];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
    double a[2][p + 1];
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nders; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = r - 1 <= pk ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nders; ++k) {
        for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
        factor *= (p - k);
    }
}

} // namespace bspline

namespace {

// Symmetric banded Cholesky (lower), bandwidth 3. a[i][d] holds A(i, i-3+d)
// for d = 0..3 (d = 3 is the diagonal).
void band_cholesky_solve(std::vector<std::array<double, 4>>& a,
                         std::vector<std::vector<double>>& rhs) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 3); j <= i; ++j) {
            double s = a[i][3 - (i - j)];
            for (int k = std::max(0, i - 3); k < j; ++k) {
                if (j - k > 3) continue;
                s -= a[i][3 - (i - k)] * a[j][3 - (j - k)];
            }
            if (j == i) {
                if (!(s > 0.0))
                    throw std::runtime_error(
                        "fit_smoothing_spline: singular normal equations (empty knot span?)");
                a[i][3] = std::sqrt(s);
            } else {
                a[i][3 - (i - j)] = s / a[j][3];
            }
        }
    }
    for (auto& y : rhs) {
        for (int i = 0; i < n; ++i) {
            double s = y[i];
            for (int k = std::max(0, i - 3); k < i; ++k) s -= a[i][3 - (i - k)] * y[k];
            y[i] = s / a[i][3];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k <= std::min(n - 1, i + 3); ++k) s -= a[k][3 - (k - i)] * y[k];
            y[i] = s / a[i][3];
        }
    }
}

} // namespace

SmoothingSpline fit_smoothing_spline(const std::vector<double>& times,
                                     const std::vector<std::vector<double>>& channels,
                                     double knot_spacing) {
    if (times.empty() || channels.empty())
        throw std::invalid_argument("fit_smoothing_spline: empty input");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("fit_smoothing_spline: times must be strictly increasing");
    for (const auto& ch : channels)
        if (ch.size() != times.size())
            throw std::invalid_argument("fit_smoothing_spline: channel length mismatch");
    if (!(knot_spacing > 0.0))
        throw std::invalid_argument("fit_smoothing_spline: knot spacing must be positive");

    const double t0 = times.front(), t1 = times.back();
    const int segments = std::max(1, static_cast<int>(std::lround((t1 - t0) / knot_spacing)));
    if (times.size() < static_cast<size_t>(4 * segments))
        throw std::invalid_argument("fit_smoothing_spline: need >= 4 points per segment on average");
    const int n_coef = segments + 3;
    const auto knots = bspline::clamped_knots(t0, t1, segments);

    // Accumulate banded normal equations: one AtA, one AtY per channel.
    std::vector<std::array<double, 4>> ata(n_coef, {0.0, 0.0, 0.0, 0.0});
    std::vector<std::vector<double>> aty(channels.size(), std::vector<double>(n_coef, 0.0));
    double ders[4][4];
    for (size_t s = 0; s < times.size(); ++s) {
        const int span = bspline::find_span(knots, times[s]);
        bspline::basis_ders(knots, span, times[s], 0, ders);
        const int base = span - 3;
        for (int i = 0; i < 4; ++i) {
            const int gi = base + i;
            for (int j = 0; j <= i; ++j)
                ata[gi][3 - (i - j)] += ders[0][i] * ders[0][j];
            for (size_t c = 0; c < channels.size(); ++c)
                aty[c][gi] += ders[0][i] * channels[c][s];
        }
    }
    band_cholesky_solve(ata, aty);

    SmoothingSpline spline;
    spline.knots_.resize(segments + 1);
    for (int i = 0; i <= segments; ++i) spline.knots_[i] = knots[3 + i];
    spline.segments_.assign(channels.size(), {});
    for (size_t c = 0; c < channels.size(); ++c) {
        auto& segs = spline.segments_[c];
        segs.resize(segments);
        for (int s = 0; s < segments; ++s) {
            const double x = spline.knots_[s];
            const int span = s + 3;
            bspline::basis_ders(knots, span, x, 3, ders);
            double f[4] = {0, 0, 0, 0};
            for (int d = 0; d < 4; ++d)
                for (int j = 0; j < 4; ++j) f[d] += ders[d][j] * aty[c][s + j];
            segs[s] = {f[0], f[1], f[2] / 2.0, f[3] / 6.0};
        }
    }
    spline.residual_sq_.assign(channels.size(), 0.0);
    for (size_t s = 0; s < times.size(); ++s)
        for (size_t c = 0; c < channels.size(); ++c) {
            const double e = spline.eval(static_cast<int>(c), times[s]) - channels[c][s];
            spline.residual_sq_[c] += e * e;
        }
    return spline;
}

double SmoothingSpline::eval(int channel, double t) const {
    const auto& segs = segments_.at(channel);
    int lo = 0, hi = static_cast<int>(knots_.size()) - 2;
    if (t <= knots_.front()) lo = 0;
    else if (t >= knots_[hi]) lo = hi;
    else {
        while (hi - lo > 0) {
            const int mid = (lo + hi + 1) / 2;
            if (knots_[mid] <= t) lo = mid;
            else hi = mid - 1;
        }
    }
    const double u = t - knots_[lo];
    const auto& c = segs[lo];
    return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
}

std::vector<double> SmoothingSpline::eval_all(double t) const {
    std::vector<double> out(segments_.size());
    for (size_t c = 0; c < segments_.size(); ++c) out[c] = eval(static_cast<int>(c), t);
    return out;
}

} // namespace rfl
