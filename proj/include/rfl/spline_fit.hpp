#pragma once

#include <array>
#include <vector>

namespace rfl {

// Least-squares cubic smoothing spline on uniform knots: C2 piecewise cubic
// minimizing the summed squared error on the data points (globally, over the
// whole C2 cubic spline space on those knots).
class SmoothingSpline {
  public:
    double eval(int channel, double t) const;
    std::vector<double> eval_all(double t) const;

    int channel_count() const { return static_cast<int>(segments_.size()); }
    int segment_count() const { return static_cast<int>(knots_.size()) - 1; }
    const std::vector<double>& knots() const { return knots_; }
    // Summed squared fit error per channel.
    const std::vector<double>& residual_sq() const { return residual_sq_; }

    friend SmoothingSpline fit_smoothing_spline(const std::vector<double>& times,
                                                const std::vector<std::vector<double>>& channels,
                                                double knot_spacing);

  private:
    std::vector<double> knots_;
    // [channel][segment] -> power-basis coefficients about the segment start.
    std::vector<std::vector<std::array<double, 4>>> segments_;
    std::vector<double> residual_sq_;
};

// times must be strictly increasing and supply at least 4 points per segment
// on average; throws std::invalid_argument otherwise.
SmoothingSpline fit_smoothing_spline(const std::vector<double>& times,
                                     const std::vector<std::vector<double>>& channels,
                                     double knot_spacing);

// Cubic B-spline basis machinery, exposed for the fit and its tests.
namespace bspline {

// Clamped knot vector on [t0, t1] with `segments` uniform intervals.
std::vector<double> clamped_knots(double t0, double t1, int segments);
// Index k with U[k] <= x < U[k+1], clamped to valid spans.
int find_span(const std::vector<double>& knots, double x);
// Nonzero cubic basis functions and derivatives up to order `nders` at x:
// ders[d][j] for basis N_{span-3+j}.
void basis_ders(const std::vector<double>& knots, int span, double x, int nders,
                double ders[4][4]);

} // namespace bspline

} // namespace rfl
