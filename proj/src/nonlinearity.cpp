#include "rfwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfwave/numerics.hpp"

namespace rfwave {
namespace {

double horner(const std::vector<double>& c, double u) {
    double r = 0.0;
    for (size_t i = c.size(); i-- > 0;) r = r * u + c[i];
    return r;
}

std::vector<double> derivative_coeffs(const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    if (d.empty()) d.push_back(0.0);
    return d;
}

// multiply polynomial by (u - r)
std::vector<double> mul_root(std::vector<double> c, double r) {
    std::vector<double> out(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
        out[i + 1] += c[i];
        out[i] -= r * c[i];
    }
    return out;
}

void validate_bistable(const Bistable& b) {
    if (!(b.u_minus < b.a && b.a < b.u_plus))
        throw std::invalid_argument("bistable: need u_minus < a < u_plus");
    const double scale = std::max({std::abs(b.f(0.5 * (b.u_minus + b.a))),
                                   std::abs(b.f(0.5 * (b.a + b.u_plus))), 1.0});
    if (std::abs(b.f(b.u_minus)) > 1e-12 * scale || std::abs(b.f(b.a)) > 1e-12 * scale ||
        std::abs(b.f(b.u_plus)) > 1e-12 * scale)
        throw std::invalid_argument("bistable: u_minus, a, u_plus must be roots of f");
    if (!(b.df(b.u_minus) < 0.0) || !(b.df(b.u_plus) < 0.0))
        throw std::invalid_argument("bistable: outer roots must be stable (f' < 0)");
}

}  // namespace

double Bistable::f(double u) const { return horner(coeffs, u); }

double Bistable::df(double u) const { return horner(derivative_coeffs(coeffs), u); }

Bistable make_cubic(double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("make_cubic: need a in (0,1)");
    Bistable b;
    b.kind = ReactionKind::cubic;
    // u(1-u)(u-a) = -u^3 + (1+a)u^2 - a u
    b.coeffs = {0.0, -a, 1.0 + a, -1.0};
    b.u_minus = 0.0;
    b.a = a;
    b.u_plus = 1.0;
    validate_bistable(b);
    return b;
}

Bistable make_quintic(double a) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("make_quintic: need a in (0,1)");
    Bistable b;
    b.kind = ReactionKind::quintic;
    std::vector<double> c = {1.0};
    for (double r : {-1.0, 0.0, a, 1.0, 2.0}) c = mul_root(std::move(c), r);
    b.coeffs = std::move(c);
    b.u_minus = 0.0;
    b.a = a;
    b.u_plus = 1.0;
    validate_bistable(b);
    return b;
}

Bistable make_polynomial(std::vector<double> coeffs, double u_minus, double a,
                         double u_plus) {
    Bistable b;
    b.kind = ReactionKind::polynomial;
    b.coeffs = std::move(coeffs);
    b.u_minus = u_minus;
    b.a = a;
    b.u_plus = u_plus;
    validate_bistable(b);
    return b;
}

double beta(const Bistable& b) {
    if (b.u_minus != 0.0 || b.u_plus != 1.0)
        throw std::invalid_argument("beta: roots must be normalized to u_minus=0, u_plus=1");
    return 0.5 * std::min(-b.df(0.0), -b.df(1.0));
}

double potential_integral(const Bistable& b) {
    std::vector<double> anti(b.coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < b.coeffs.size(); ++i)
        anti[i + 1] = b.coeffs[i] / static_cast<double>(i + 1);
    return horner(anti, b.u_plus) - horner(anti, b.u_minus);
}

int predicted_speed_sign(const Bistable& b) {
    const double p = potential_integral(b);
    if (std::abs(p) < 1e-14) return 0;
    return p > 0.0 ? -1 : 1;
}

ReactionRange reaction_range(const Bistable& b) {
    ReactionRange r;
    if (b.kind == ReactionKind::cubic) {
        // critical points of the cubic in closed form
        const double a = b.a;
        const double disc = std::sqrt((1.0 + a) * (1.0 + a) - 3.0 * a);
        const double c1 = ((1.0 + a) - disc) / 3.0;
        const double c2 = ((1.0 + a) + disc) / 3.0;
        r.f_min = std::min({b.f(c1), b.f(c2), 0.0});
        r.f_max = std::max({b.f(c1), b.f(c2), 0.0});
        return r;
    }
    // dense scan plus golden-section refinement around the best samples
    const int n = 10000;
    const double lo = b.u_minus, hi = b.u_plus;
    double umin = lo, umax = lo;
    r.f_min = b.f(lo);
    r.f_max = b.f(lo);
    for (int i = 1; i <= n; ++i) {
        const double u = lo + (hi - lo) * i / n;
        const double v = b.f(u);
        if (v < r.f_min) { r.f_min = v; umin = u; }
        if (v > r.f_max) { r.f_max = v; umax = u; }
    }
    const double h = (hi - lo) / n;
    auto refine = [&](double u0, double sgn) {
        double a0 = std::max(lo, u0 - h), b0 = std::min(hi, u0 + h);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b0 - gr * (b0 - a0), d = a0 + gr * (b0 - a0);
        for (int it = 0; it < 80; ++it) {
            if (sgn * b.f(c) < sgn * b.f(d)) b0 = d; else a0 = c;
            c = b0 - gr * (b0 - a0);
            d = a0 + gr * (b0 - a0);
        }
        return 0.5 * (a0 + b0);
    };
    r.f_min = std::min(r.f_min, b.f(refine(umin, 1.0)));
    r.f_max = std::max(r.f_max, b.f(refine(umax, -1.0)));
    return r;
}

Bistable rescale_to_unit(const Bistable& b) {
    const double w = b.u_plus - b.u_minus;
    // g(v) = f(u_minus + w v)/w: substitute and collect powers of v
    std::vector<double> g(b.coeffs.size(), 0.0);
    std::vector<double> shifted = {1.0};  // (u_minus + w v)^k, iteratively
    for (size_t k = 0; k < b.coeffs.size(); ++k) {
        for (size_t j = 0; j < shifted.size(); ++j) g[j] += b.coeffs[k] * shifted[j];
        // multiply by (u_minus + w v)
        std::vector<double> next(shifted.size() + 1, 0.0);
        for (size_t j = 0; j < shifted.size(); ++j) {
            next[j] += b.u_minus * shifted[j];
            next[j + 1] += w * shifted[j];
        }
        shifted = std::move(next);
    }
    for (double& c : g) c /= w;
    return make_polynomial(std::move(g), 0.0, (b.a - b.u_minus) / w, 1.0);
}

namespace {

// First u > from (marching in direction dir) where f leaves [f_min, f_max];
// refined by bisection to ~1e-14.
double escape_point(const Bistable& b, const ReactionRange& r, double from, double dir) {
    const double step = 1e-3 * std::max(1.0, b.u_plus - b.u_minus);
    double u = from;
    for (int i = 0; i < 2000000; ++i) {
        const double un = u + dir * step;
        const double v = b.f(un);
        if (v < r.f_min || v > r.f_max) {
            // bisect on the escaped side
            double lo = u, hi = un;
            for (int k = 0; k < 100; ++k) {
                const double mid = 0.5 * (lo + hi);
                const double vm = b.f(mid);
                if (vm < r.f_min || vm > r.f_max) hi = mid; else lo = mid;
            }
            return lo;
        }
        u = un;
    }
    throw std::runtime_error("clamp: reaction never leaves [f_min, f_max]");
}

}  // namespace

ClampedBistable clamp(const Bistable& b, double blend_width) {
    if (!(blend_width > 0.0)) throw std::invalid_argument("clamp: blend_width must be > 0");
    const ReactionRange r = reaction_range(b);
    ClampedBistable c;
    c.base = b;
    c.blend_width = blend_width;

    c.right_cut = escape_point(b, r, b.u_plus, +1.0);
    c.right_level = (b.f(c.right_cut + 1e-9) < r.f_min) ? r.f_min : r.f_max;
    c.right_start = std::max(b.u_plus, c.right_cut - blend_width);

    c.left_cut = escape_point(b, r, b.u_minus, -1.0);
    c.left_level = (b.f(c.left_cut - 1e-9) < r.f_min) ? r.f_min : r.f_max;
    c.left_start = std::min(b.u_minus, c.left_cut + blend_width);
    return c;
}

double ClampedBistable::f(double u) const {
    if (u >= left_start && u <= right_start) return base.f(u);
    if (u > right_start) {
        if (u >= right_cut) return right_level;
        const double t = (u - right_start) / (right_cut - right_start);
        const double s = smoothstep5(t);
        return (1.0 - s) * base.f(u) + s * right_level;
    }
    if (u <= left_cut) return left_level;
    const double t = (left_start - u) / (left_start - left_cut);
    const double s = smoothstep5(t);
    return (1.0 - s) * base.f(u) + s * left_level;
}

}  // namespace rfwave
