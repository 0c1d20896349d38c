// common.hpp — shared aliases, numeric constants and small angle/statistics helpers

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nhsync {

using cxd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cxd iu{0.0, 1.0};

inline constexpr const char* version = "0.1.0";

// Numeric failure during propagation/integration (maps to exit code 2 in the CLI).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) noexcept {
    a = std::remainder(a, 2.0 * pi);  // lands in [-pi, pi]
    return a <= -pi ? a + 2.0 * pi : a;
}

// Order-independent sum: pairwise reduction over a materialized buffer, so that
// serial and parallel producers reduce to identical bits.
inline double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean_of: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return pairwise_sum(sq) / static_cast<double>(v.size());
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = a + b x with centered R^2.
inline LineFit fit_line(const RVector& x, const RVector& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two matching points");
    const double n = static_cast<double>(x.size());
    const double mx = x.mean(), my = y.mean();
    const double sxx = (x.array() - mx).square().sum();
    const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double ss_tot = (y.array() - my).square().sum();
    const double ss_res = (y.array() - (f.intercept + f.slope * x.array())).square().sum();
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    (void)n;
    return f;
}

// Least squares through the origin, with the uncentered R^2 convention.
inline LineFit fit_through_origin(const RVector& x, const RVector& y) {
    if (x.size() != y.size() || x.size() < 1)
        throw std::invalid_argument("fit_through_origin: need matching points");
    const double sxx = x.array().square().sum();
    if (sxx == 0.0) throw std::invalid_argument("fit_through_origin: degenerate abscissa");
    LineFit f;
    f.slope = (x.array() * y.array()).sum() / sxx;
    const double ss_res = (y.array() - f.slope * x.array()).square().sum();
    const double ss_tot = y.array().square().sum();
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return f;
}

}  // namespace nhsync
