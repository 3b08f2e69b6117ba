#include "gibbstree/interp.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"

namespace gibbstree {

namespace {

double sgn(double v) { return v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0; }

double end_slope(double h0, double h1, double d0, double d1) {
    double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sgn(m) != sgn(d0)) return 0.0;
    if (sgn(d0) != sgn(d1) && std::abs(m) > 3 * std::abs(d0)) return 3 * d0;
    return m;
}

}  // namespace

std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw contract_error("pchip: need >= 2 matching knots");
    std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (h[i] <= 0) throw contract_error("pchip: knots must be strictly increasing");
        d[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        m[0] = m[1] = d[0];
        return m;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] > 0) {
            double w1 = 2 * h[i] + h[i - 1];
            double w2 = h[i] + 2 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    // Keep every segment inside the Fritsch–Carlson monotonicity disc.
    for (size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) continue;
        double a = m[i] / d[i], b = m[i + 1] / d[i];
        double r = a * a + b * b;
        if (r > 9.0) {
            double s = 3.0 / std::sqrt(r);
            m[i] = s * a * d[i];
            m[i + 1] = s * b * d[i];
        }
    }
    return m;
}

PchipInterpolant::PchipInterpolant(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    slope_ = pchip_slopes(x_, y_);
    cum_.assign(x_.size(), 0.0);
    for (size_t i = 0; i + 1 < x_.size(); ++i)
        cum_[i + 1] = cum_[i] + segment_integral(static_cast<int>(i), x_[i + 1]);
}

int PchipInterpolant::segment_of(double t) const {
    if (t <= x_.front()) return 0;
    if (t >= x_.back()) return static_cast<int>(x_.size()) - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return static_cast<int>(it - x_.begin()) - 1;
}

double PchipInterpolant::operator()(double t) const {
    const int i = segment_of(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * slope_[i] +
           (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * slope_[i + 1];
}

double PchipInterpolant::segment_integral(int i, double t) const {
    // Antiderivative of the Hermite basis on [x_i, x_i + h], in the local coordinate.
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
    const double H00 = 0.5 * s4 - s3 + s;
    const double H10 = 0.25 * s4 - (2.0 / 3.0) * s3 + 0.5 * s2;
    const double H01 = -0.5 * s4 + s3;
    const double H11 = 0.25 * s4 - s3 / 3.0;
    return h * (H00 * y_[i] + H10 * h * slope_[i] + H01 * y_[i + 1] + H11 * h * slope_[i + 1]);
}

double PchipInterpolant::integral_to(double t) const {
    const int i = segment_of(t);
    return cum_[i] + segment_integral(i, t);
}

double PchipInterpolant::total_integral() const { return cum_.back(); }

}  // namespace gibbstree
