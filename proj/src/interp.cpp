#include "rollsing/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rollsing {

namespace {

// Endpoint slope by the non-centered three-point formula, clamped per
// Fritsch-Carlson so the end interval stays shape-preserving.
double edge_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n != ys_.size() || n < 2)
        throw std::invalid_argument("MonotoneCubic needs two or more matched points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("MonotoneCubic abscissae must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs_[i + 1] - xs_[i];
        delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }

    slopes_.assign(n, 0.0);
    if (n == 2) {
        slopes_[0] = slopes_[1] = delta[0];
        return;
    }
    slopes_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    slopes_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            slopes_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();

    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;

    const double h = xs_[i + 1] - xs_[i];
    const double s = (x - xs_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
}

}  // namespace rollsing
