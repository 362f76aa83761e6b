#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rfwave {

// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 on [0,1], clamped outside.
// C^2 at both junctions; used for background ramps, windows and blends.
inline double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

inline double smoothstep5_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double u = t * (1.0 - t);
    return 30.0 * u * u;
}

inline double smoothstep5_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

// sin(pi*x) with exact zeros at integer x. Plain std::sin(pi*x) returns
// ~1e-16 garbage at the extremal-skew coefficients where an exact zero is
// required.
inline double sin_pi(double x) {
    double r = std::remainder(x, 2.0);  // r in [-1, 1]
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    return std::sin(3.141592653589793238462643383279502884 * r);
}

inline double cos_pi(double x) { return sin_pi(x + 0.5); }

// Cubic Lagrange interpolation on a uniform grid {x0 + i*dx}.
// Stencil is centered and clamped at the ends; exact on degree-3 data.
inline double cubic_interp_uniform(const std::vector<double>& v, double x0,
                                   double dx, double x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    if (n < 4) throw std::invalid_argument("cubic_interp_uniform: need >= 4 points");
    double t = (x - x0) / dx;
    const double tr = std::round(t);
    if (std::abs(t - tr) < 1e-12 && tr >= 0.0 && tr < static_cast<double>(n))
        return v[static_cast<std::ptrdiff_t>(tr)];  // exact at the nodes
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor(t));
    std::ptrdiff_t b = j - 1;
    if (b < 0) b = 0;
    if (b > n - 4) b = n - 4;
    double u = t - static_cast<double>(b);
    double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    return w0 * v[b] + w1 * v[b + 1] + w2 * v[b + 2] + w3 * v[b + 3];
}

// Least-squares line y = a + b*x; returns {intercept, slope, r2, rms_residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
    double rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit f;
    f.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.rms = std::sqrt(ss_res / n);
    f.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return f;
}

}  // namespace rfwave
