#pragma once

#include <span>
#include <vector>

namespace gibbstree {

/// Monotone cubic (Fritsch–Carlson) interpolant over strictly increasing knots.
///
/// Piecewise-monotone by construction: on every interval the interpolant stays
/// within the range of its two endpoint values, so positive data stays positive.
/// Evaluation outside the knot range extends the boundary cubic segment.
class PchipInterpolant {
public:
    PchipInterpolant(std::span<const double> x, std::span<const double> y);

    double operator()(double t) const;

    /// Integral over [x.front(), t], t inside or slightly outside the knot range.
    double integral_to(double t) const;

    /// Total integral over the knot range.
    double total_integral() const;

    int n_knots() const { return static_cast<int>(x_.size()); }
    double knot(int i) const { return x_[i]; }

private:
    std::vector<double> x_, y_, slope_;
    std::vector<double> cum_;  // integral from x_[0] to x_[i]

    int segment_of(double t) const;
    double segment_integral(int seg, double t) const;
};

/// Fritsch–Carlson slopes for the knots (exposed for reuse and testing).
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y);

}  // namespace gibbstree
