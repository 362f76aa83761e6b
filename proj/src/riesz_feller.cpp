#include "rfwave/riesz_feller.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "rfwave/numerics.hpp"
#include "rfwave/spectral.hpp"

namespace rfwave {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 4-point Gauss-Legendre on [-1, 1]
constexpr double kGL4x[4] = {-0.8611363115940526, -0.3399810435848563,
                             0.3399810435848563, 0.8611363115940526};
constexpr double kGL4w[4] = {0.3478548451374538, 0.6521451548625461,
                             0.6521451548625461, 0.3478548451374538};

// Field sample with constant tail extension by index.
inline double sample_ext(const Field& f, long i) {
    if (i < 0) return f.tail_left;
    if (i >= f.grid.n_points) return f.tail_right;
    return f.values[static_cast<size_t>(i)];
}

// Interpolated difference f(x) - f_center, evaluated as a weighted sum of
// nodal differences so a constant field yields exactly zero.
inline double interp_diff(const Field& f, double x, double f_center) {
    const Grid& g = f.grid;
    if (x < -g.half_width) return f.tail_left - f_center;
    if (x > g.half_width) return f.tail_right - f_center;
    double t = (x + g.half_width) / g.dx;
    long b = static_cast<long>(std::floor(t)) - 1;
    if (b < 0) b = 0;
    if (b > g.n_points - 4) b = g.n_points - 4;
    const double u = t - static_cast<double>(b);
    const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    return w0 * (sample_ext(f, b) - f_center) + w1 * (sample_ext(f, b + 1) - f_center) +
           w2 * (sample_ext(f, b + 2) - f_center) + w3 * (sample_ext(f, b + 3) - f_center);
}

struct LocalDerivs {
    double f1, f2, f3, f4;
};

// Centered finite differences with constant tail extension (4th order for
// f', f''; 2nd order for f''', f'''').
LocalDerivs local_derivs(const Field& f, long i) {
    const double h = f.grid.dx;
    const double fm2 = sample_ext(f, i - 2), fm1 = sample_ext(f, i - 1);
    const double f0 = sample_ext(f, i), fp1 = sample_ext(f, i + 1), fp2 = sample_ext(f, i + 2);
    LocalDerivs d;
    d.f1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    d.f2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    d.f3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    d.f4 = (fp2 - 4.0 * fp1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (h * h * h * h);
    return d;
}

// Same stencils at an arbitrary point through the interpolant. The sigma-odd
// f' term of the near-field model must be taken at the probe itself, or it
// leaks through the c1 != c2 weighting.
LocalDerivs local_derivs_at(const Field& f, double x) {
    const Grid& g = f.grid;
    const double h = g.dx;
    const long i = std::lround((x + g.half_width) / h);
    if (i >= 0 && i < g.n_points && std::abs(g.x(static_cast<int>(i)) - x) < 1e-9 * h)
        return local_derivs(f, i);
    const double fm2 = f.value_at(x - 2.0 * h), fm1 = f.value_at(x - h);
    const double f0 = f.value_at(x), fp1 = f.value_at(x + h), fp2 = f.value_at(x + 2.0 * h);
    LocalDerivs d;
    d.f1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    d.f2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    d.f3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    d.f4 = (fp2 - 4.0 * fp1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (h * h * h * h);
    return d;
}

}  // namespace

bool rf_admissible(double alpha, double theta) {
    return alpha > 0.0 && alpha <= 2.0 &&
           std::abs(theta) <= std::min(alpha, 2.0 - alpha) + 1e-15;
}

RFParams make_rf_params(double alpha, double theta) {
    if (!rf_admissible(alpha, theta))
        throw std::invalid_argument(
            "RFParams: need 0 < alpha <= 2 and |theta| <= min(alpha, 2-alpha)");
    return RFParams{alpha, theta};
}

std::complex<double> symbol(const RFParams& p, double xi) {
    if (xi == 0.0) return {0.0, 0.0};
    const double mag = std::pow(std::abs(xi), p.alpha);
    const double phase = (xi > 0.0 ? 1.0 : -1.0) * p.theta * 0.5;
    return {-mag * cos_pi(phase), -mag * sin_pi(phase)};
}

IntegralCoeffs coeffs(const RFParams& p) {
    if (p.alpha == 1.0)
        throw std::invalid_argument("coeffs: alpha = 1 is the principal-value case");
    if (p.alpha >= 2.0)
        throw std::invalid_argument("coeffs: no jump representation at alpha = 2");
    const double g = std::tgamma(1.0 + p.alpha) / kPi;
    IntegralCoeffs c;
    c.c1 = g * sin_pi(0.5 * (p.alpha + p.theta));
    c.c2 = g * sin_pi(0.5 * (p.alpha - p.theta));
    return c;
}

double estimate_constant(const RFParams& p) {
    const double g = std::tgamma(1.0 + p.alpha) / kPi;
    return g * std::abs(sin_pi(0.5 * (p.alpha + p.theta)) + sin_pi(0.5 * (p.alpha - p.theta)));
}

Field apply_spectral(const Field& field, const RFParams& p, double boundary_ratio_tol) {
    if (field.tail_left != 0.0 || field.tail_right != 0.0)
        throw std::invalid_argument("apply_spectral: field tails must be 0 (decompose first)");
    const double sup = field.sup_abs();
    if (sup > 0.0 && field.boundary_mismatch() > boundary_ratio_tol * sup)
        throw std::invalid_argument(
            "apply_spectral: boundary magnitude too large; periodization would pollute a "
            "heavy-tailed operator");
    SpectralGrid sg(field.grid);
    auto spec = sg.analyze(field.values);
    for (int j = 0; j < sg.n_fft(); ++j)
        spec[static_cast<size_t>(j)] *= grid_symbol(p, sg, j);
    double max_imag = 0.0;
    auto out = sg.synthesize(spec, &max_imag);
    if (max_imag > 1e-10 * std::max(1.0, sup))
        throw std::runtime_error("apply_spectral: imaginary residue exceeds 1e-10");
    return make_field(field.grid, std::move(out), 0.0, 0.0, field.tail_tol);
}

double apply_integral_at(const Field& field, const RFParams& p, double x, double m_loc) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0))
        throw std::invalid_argument("apply_integral: need 1 < alpha < 2");
    const Grid& g = field.grid;
    const IntegralCoeffs cc = coeffs(p);
    const double al = p.alpha;
    const double h = g.dx;

    const double fc = field.value_at(x);
    const LocalDerivs d = local_derivs_at(field, x);

    const double xi_sw = std::min(2.0 * h, m_loc);
    // Taylor stub on [0, xi_sw]: avoids the catastrophic cancellation of the
    // raw difference quotient at sub-grid offsets.
    const double even_stub = 0.5 * d.f2 * std::pow(xi_sw, 2.0 - al) / (2.0 - al) +
                             d.f4 / 24.0 * std::pow(xi_sw, 4.0 - al) / (4.0 - al);
    const double odd_stub = d.f3 / 6.0 * std::pow(xi_sw, 3.0 - al) / (3.0 - al);

    auto side = [&](double sgn) -> double {
        double acc = even_stub + sgn * odd_stub;
        // f'(x)*xi subtraction integrates in closed form on [xi_sw, inf)
        acc -= sgn * d.f1 * std::pow(xi_sw, 1.0 - al) / (al - 1.0);
        // graded geometric panels with Gauss nodes on [xi_sw, xi_flat]
        const double xi_flat =
            std::max(m_loc, (sgn > 0.0 ? g.half_width - x : x + g.half_width));
        double a0 = xi_sw;
        while (a0 < xi_flat) {
            const double b0 = std::min(a0 * 1.15, xi_flat);
            const double mid = 0.5 * (a0 + b0), half = 0.5 * (b0 - a0);
            double panel = 0.0;
            for (int q = 0; q < 4; ++q) {
                const double xi = mid + half * kGL4x[q];
                const double diff = interp_diff(field, x + sgn * xi, fc);
                panel += kGL4w[q] * diff * std::pow(xi, -1.0 - al);
            }
            acc += panel * half;
            a0 = b0;
        }
        // beyond xi_flat the field is its constant tail
        const double tail = (sgn > 0.0) ? field.tail_right : field.tail_left;
        acc += (tail - fc) * std::pow(xi_flat, -al) / al;
        return acc;
    };

    return cc.c1 * side(1.0) + cc.c2 * side(-1.0);
}

double apply_integral_low_at(const Field& field, const RFParams& p, double x) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw std::invalid_argument("apply_integral_low_at: need 0 < alpha < 1");
    const Grid& g = field.grid;
    const IntegralCoeffs cc = coeffs(p);
    const double al = p.alpha;
    const double fc = field.value_at(x);
    const LocalDerivs d = local_derivs_at(field, x);
    const double xi_sw = 2.0 * g.dx;

    auto side = [&](double sgn) -> double {
        // Taylor stub: int_0^s (sgn f' xi + f'' xi^2/2 + ...) xi^{-1-a}
        double acc = sgn * d.f1 * std::pow(xi_sw, 1.0 - al) / (1.0 - al) +
                     0.5 * d.f2 * std::pow(xi_sw, 2.0 - al) / (2.0 - al) +
                     sgn * d.f3 / 6.0 * std::pow(xi_sw, 3.0 - al) / (3.0 - al);
        const double xi_flat = std::max(1.0, (sgn > 0.0 ? g.half_width - x : x + g.half_width));
        double a0 = xi_sw;
        while (a0 < xi_flat) {
            const double b0 = std::min(a0 * 1.15, xi_flat);
            const double mid = 0.5 * (a0 + b0), half = 0.5 * (b0 - a0);
            double panel = 0.0;
            for (int q = 0; q < 4; ++q) {
                const double xi = mid + half * kGL4x[q];
                panel += kGL4w[q] * interp_diff(field, x + sgn * xi, fc) * std::pow(xi, -1.0 - al);
            }
            acc += panel * half;
            a0 = b0;
        }
        const double tail = (sgn > 0.0) ? field.tail_right : field.tail_left;
        acc += (tail - fc) * std::pow(xi_flat, -al) / al;
        return acc;
    };
    return cc.c1 * side(1.0) + cc.c2 * side(-1.0);
}

Field apply_integral(const Field& field, const RFParams& p, double m_loc) {
    if (!field.tails_settled())
        throw std::invalid_argument("apply_integral: field tails not settled");
    const Grid& g = field.grid;
    std::vector<double> out(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i)
        out[static_cast<size_t>(i)] = apply_integral_at(field, p, g.x(i), m_loc);
    double bnd = std::max(std::abs(out.front()), std::abs(out.back()));
    return make_field(g, std::move(out), 0.0, 0.0, std::max(1e-6, 2.0 * bnd));
}

namespace {

void discrete_norms(const Field& f, double* sup_d1, double* sup_d2) {
    double s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < f.grid.n_points; ++i) {
        const LocalDerivs d = local_derivs(f, i);
        s1 = std::max(s1, std::abs(d.f1));
        s2 = std::max(s2, std::abs(d.f2));
    }
    *sup_d1 = s1;
    *sup_d2 = s2;
}

}  // namespace

double estimate_bound(const Field& field, const RFParams& p, double M) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0))
        throw std::invalid_argument("estimate_bound: need 1 < alpha < 2");
    if (!(M > 0.0)) throw std::invalid_argument("estimate_bound: need M > 0");
    double s1 = 0.0, s2 = 0.0;
    discrete_norms(field, &s1, &s2);
    const double K = estimate_constant(p);
    return K * s2 * std::pow(M, 2.0 - p.alpha) / (2.0 - p.alpha) +
           4.0 * K * s1 * std::pow(M, 1.0 - p.alpha) / (p.alpha - 1.0);
}

double estimate_bound_optimal_M(const Field& field, const RFParams& p) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0))
        throw std::invalid_argument("estimate_bound_optimal_M: need 1 < alpha < 2");
    double s1 = 0.0, s2 = 0.0;
    discrete_norms(field, &s1, &s2);
    if (s2 <= 0.0) return 1.0;
    return 4.0 * s1 / s2;
}

std::shared_ptr<const std::vector<double>> background_operator_action(const Grid& g,
                                                                      const RFParams& p) {
    using Key = std::tuple<double, int, double, double>;
    static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
    static std::mutex mtx;
    const Key key{g.half_width, g.n_points, p.alpha, p.theta};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<double> action(static_cast<size_t>(g.n_points));
    if (p.alpha == 2.0) {
        // ramp second derivative in closed form
        for (int i = 0; i < g.n_points; ++i) {
            const double t = (g.x(i) + 0.5 * g.half_width) / g.half_width;
            action[static_cast<size_t>(i)] =
                smoothstep5_d2(t) / (g.half_width * g.half_width);
        }
    } else {
        Field ramp = reference_ramp_field(g);
        Field a = apply_integral(ramp, p);
        action = std::move(a.values);
    }
    auto sp = std::make_shared<const std::vector<double>>(std::move(action));
    std::lock_guard<std::mutex> lock(mtx);
    cache[key] = sp;
    return sp;
}

Field apply(const Field& field, const RFParams& p) {
    Decomposition d = decompose(field);
    // decomposed front perturbations carry algebraic tails at ~1e-3 of sup;
    // the resulting wraparound is harmless at the residual scales we report,
    // so the internal spectral call relaxes the strict default.
    Field spec = apply_spectral(d.perturbation, p, 0.05);
    const double amp = field.tail_right - field.tail_left;
    if (amp != 0.0) {
        auto bg = background_operator_action(field.grid, p);
        for (int i = 0; i < field.grid.n_points; ++i)
            spec.values[static_cast<size_t>(i)] += amp * (*bg)[static_cast<size_t>(i)];
    }
    double bnd = std::max(std::abs(spec.values.front()), std::abs(spec.values.back()));
    spec.tail_left = 0.0;
    spec.tail_right = 0.0;
    spec.tail_tol = std::max(1e-6, 2.0 * bnd);
    return spec;
}

}  // namespace rfwave
