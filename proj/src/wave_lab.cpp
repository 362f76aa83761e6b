#include "rfwave/wave_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rfwave/numerics.hpp"

namespace rfwave {
namespace {

double golden_min(double lo, double hi, const std::function<double(double)>& f,
                  int iters = 60) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// Inverse interpolation on the bracket [x_i, x_{i+1}]. The 4-point Lagrange
// cubic is used when it is monotone across the bracket (4th-order accurate);
// otherwise Fritsch-Carlson limited slopes force a monotone Hermite cubic.
double invert_monotone_cubic(const Field& f, int i, double level) {
    const Grid& g = f.grid;
    const double h = g.dx;
    auto val = [&](int j) { return f.values[static_cast<size_t>(std::clamp(j, 0, g.n_points - 1))]; };
    const double y0 = val(i), y1 = val(i + 1);
    if (y1 == y0) return g.x(i);

    // Lagrange cubic through nodes i-1..i+2, offset u in [1, 2] on the bracket
    auto lagrange = [&](double u) {
        const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
        const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
        const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
        return w0 * val(i - 1) + w1 * val(i) + w2 * val(i + 1) + w3 * val(i + 2);
    };
    bool monotone = true;
    double prev = y0;
    for (int q = 1; q <= 8; ++q) {
        const double v = lagrange(1.0 + q / 8.0);
        if (v < prev) { monotone = false; break; }
        prev = v;
    }
    if (monotone) {
        double lo = 1.0, hi = 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (lagrange(mid) < level) lo = mid; else hi = mid;
        }
        return g.x(i) + h * (0.5 * (lo + hi) - 1.0);
    }

    double m0 = 0.5 * (val(i + 1) - val(i - 1)) / h;
    double m1 = 0.5 * (val(i + 2) - val(i)) / h;
    const double s = (y1 - y0) / h;
    m0 = std::clamp(m0, 0.0, 3.0 * s);
    m1 = std::clamp(m1, 0.0, 3.0 * s);
    auto hermite = [&](double t) {
        const double t2 = t * t, t3 = t2 * t;
        return y0 * (2 * t3 - 3 * t2 + 1) + h * m0 * (t3 - 2 * t2 + t) +
               y1 * (-2 * t3 + 3 * t2) + h * m1 * (t3 - t2);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hermite(mid) < level) lo = mid; else hi = mid;
    }
    return g.x(i) + h * 0.5 * (lo + hi);
}

// first crossing of `level` in a monotone-increasing profile
double profile_crossing(const Field& f, double level) {
    for (int i = 0; i + 1 < f.grid.n_points; ++i) {
        if (f.values[static_cast<size_t>(i)] < level &&
            f.values[static_cast<size_t>(i + 1)] >= level)
            return invert_monotone_cubic(f, i, level);
    }
    throw std::runtime_error("profile never crosses the requested level");
}

}  // namespace

Field initial_zeta(const Grid& g) {
    if (g.half_width < 8.0)
        throw std::invalid_argument("initial_zeta: domain must have half-width >= 8");
    return sample_field(
        g, [](double x) { return smoothstep5((x + 2.0) / 4.0); }, 0.0, 1.0, 0.0);
}

std::vector<std::pair<double, double>> track_level(const Trajectory& traj, double level) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.snapshots.size());
    for (size_t s = 0; s < traj.snapshots.size(); ++s) {
        const Field& f = traj.snapshots[s];
        int cross = -1;
        for (int i = 0; i + 1 < f.grid.n_points; ++i) {
            const double a = f.values[static_cast<size_t>(i)];
            const double b = f.values[static_cast<size_t>(i + 1)];
            if (a < level && b >= level) {
                if (cross >= 0)
                    throw std::runtime_error("track_level: multiple upward crossings");
                cross = i;
            } else if (a >= level && b < level) {
                throw std::runtime_error("track_level: snapshot not increasing through level");
            }
        }
        if (cross < 0) throw std::runtime_error("track_level: level not bracketed");
        out.emplace_back(traj.times[s], invert_monotone_cubic(f, cross, level));
    }
    return out;
}

WaveExtraction extract_wave(const Trajectory& traj, const Bistable& b, const RFParams& p,
                            const ExtractOptions& opt) {
    if (traj.snapshots.size() < 8)
        throw std::invalid_argument("extract_wave: too few snapshots");
    if (b.u_minus != 0.0 || b.u_plus != 1.0)
        throw std::invalid_argument("extract_wave: reaction must be normalized to roots 0, 1");

    WaveExtraction w;
    w.params = p;
    w.level_a = b.a;
    w.z_track = track_level(traj, b.a);

    const double t_end = traj.times.back();
    const double t_keep = opt.settle_fraction * t_end;
    std::vector<double> ts, zs;
    std::vector<size_t> kept;
    for (size_t s = 0; s < traj.times.size(); ++s) {
        if (traj.times[s] < t_keep) continue;
        ts.push_back(traj.times[s]);
        zs.push_back(w.z_track[s].second);
        kept.push_back(s);
    }
    if (ts.size() < 6) throw std::invalid_argument("extract_wave: settled window too short");

    LineFit fit = fit_line(ts, zs);
    w.speed = fit.slope;
    w.speed_fit_r2 = fit.r2;
    w.speed_fit_rms = fit.rms;
    const double span = ts.back() - ts.front();
    w.stationary = std::abs(fit.slope) * span <= 1e-2 && fit.rms <= 2e-3;
    if (!(fit.r2 >= 0.999) && !w.stationary)
        throw std::runtime_error(
            "extract_wave: front not yet rigid (speed fit r2 < 0.999); run longer T");

    // z-aligned average of the kept snapshots
    const Grid& g = traj.snapshots.front().grid;
    std::vector<double> acc(static_cast<size_t>(g.n_points), 0.0);
    for (size_t idx = 0; idx < kept.size(); ++idx) {
        const double z = zs[idx];
        if (!(std::abs(z) < 0.5 * g.half_width))
            throw std::runtime_error("extract_wave: wave drifted beyond half the domain");
        Field aligned = shift_interpolate(traj.snapshots[kept[idx]], z);
        for (int i = 0; i < g.n_points; ++i)
            acc[static_cast<size_t>(i)] += aligned.values[static_cast<size_t>(i)];
    }
    for (double& v : acc) v /= static_cast<double>(kept.size());
    const double mism = std::max(std::abs(acc.front()), std::abs(1.0 - acc.back()));
    w.profile = make_field(g, std::move(acc), 0.0, 1.0, std::max(1e-6, 2.0 * mism));

    w.monotonicity_defect = 0.0;
    for (int i = 1; i < g.n_points; ++i)
        w.monotonicity_defect =
            std::min(w.monotonicity_defect, w.profile.values[static_cast<size_t>(i)] -
                                                w.profile.values[static_cast<size_t>(i - 1)]);

    // traveling-wave residual -cU' - DU - f(U)
    Field du = apply(w.profile, p);
    w.residual_sup = 0.0;
    w.residual_edge = 0.0;
    for (int i = 1; i + 1 < g.n_points; ++i) {
        const double up = (w.profile.values[static_cast<size_t>(i + 1)] -
                           w.profile.values[static_cast<size_t>(i - 1)]) /
                          (2.0 * g.dx);
        const double r = -w.speed * up - du.values[static_cast<size_t>(i)] -
                         b.f(w.profile.values[static_cast<size_t>(i)]);
        w.residual_edge = std::max(w.residual_edge, std::abs(r));
        if (std::abs(g.x(i)) <= 0.9 * g.half_width)
            w.residual_sup = std::max(w.residual_sup, std::abs(r));
    }

    w.front_width = profile_crossing(w.profile, 0.95) - profile_crossing(w.profile, 0.05);
    w.tail = fit_tail(w.profile, p, w.front_width);
    return w;
}

double speed_from_formula(const WaveExtraction& w, const Bistable& b) {
    if (w.params.theta != 0.0)
        throw std::invalid_argument(
            "speed_from_formula: derived for the symmetric operator only (theta = 0)");
    const Grid& g = w.profile.grid;
    double denom = 0.0;
    for (int i = 1; i + 1 < g.n_points; ++i) {
        const double up = (w.profile.values[static_cast<size_t>(i + 1)] -
                           w.profile.values[static_cast<size_t>(i - 1)]) /
                          (2.0 * g.dx);
        denom += up * up * g.dx;
    }
    if (denom < 1e-12)
        throw std::runtime_error("speed_from_formula: vanishing profile derivative");
    return -potential_integral(b) / denom;
}

double speed_bound(const Bistable& b, const RFParams& p) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0))
        throw std::invalid_argument("speed_bound: need 1 < alpha < 2");
    if (b.u_minus != 0.0 || b.u_plus != 1.0)
        throw std::invalid_argument("speed_bound: reaction must be normalized to roots 0, 1");
    const double abar = std::min(b.a, 1.0 - b.a);
    // min |f| over the two mid-bands
    double rho_min = 1e300;
    auto band_min = [&](double lo, double hi) {
        for (int i = 0; i <= 400; ++i) {
            const double u = lo + (hi - lo) * i / 400.0;
            rho_min = std::min(rho_min, std::abs(b.f(u)));
        }
    };
    band_min(abar / 3.0, 2.0 * abar / 3.0);
    band_min(1.0 - 2.0 * abar / 3.0, 1.0 - abar / 3.0);
    if (!(rho_min > 0.0)) throw std::runtime_error("speed_bound: degenerate mid-band");

    // zeta = (1 + tanh)/2: ||zeta'|| = 1/2, ||zeta''|| = 2/(3 sqrt 3)
    const double z1 = 0.5;
    const double z2 = 2.0 / (3.0 * std::sqrt(3.0));
    const double K = estimate_constant(p);
    auto rho = [&](double eps) { return K * (eps * eps * z2 + eps * z1); };
    double hi = 1.0;
    while (rho(hi) < rho_min) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rho(mid) < rho_min) lo = mid; else hi = mid;
    }
    const double eps_bar = 0.5 * (lo + hi);
    if (!(eps_bar > 0.0)) throw std::runtime_error("speed_bound: bisection bracket failure");
    ReactionRange r = reaction_range(b);
    const double fnorm = std::max(std::abs(r.f_min), std::abs(r.f_max));
    return fnorm / eps_bar * (3.0 + abar) / abar;
}

TailFit fit_tail(const Field& profile, const RFParams& p, double front_width) {
    const Grid& g = profile.grid;
    TailFit tf;
    const double edge =
        std::max(std::abs(profile_crossing(profile, 0.95)),
                 std::abs(profile_crossing(profile, 0.05)));
    tf.window_lo =
        std::min(std::max(2.0 * std::max(front_width, 1.0), edge + 1.0), 0.35 * g.half_width);
    tf.window_hi = 0.8 * g.half_width;
    // samples below the extraction noise floor carry no tail information
    const double floor_v = std::max(1e-7, 3.0 * profile.boundary_mismatch());

    // the two sides carry different amplitudes for a != 1/2, so each side is
    // fitted on its own and the slopes are combined
    std::vector<double> lxl, lyl, lxr, lyr, axl, axr;
    double vmax = 0.0, vmin = 1e300;
    for (int i = 0; i < g.n_points; ++i) {
        const double x = g.x(i);
        const double axv = std::abs(x);
        if (axv < tf.window_lo || axv > tf.window_hi) continue;
        const double v = (x < 0.0) ? profile.values[static_cast<size_t>(i)]
                                   : 1.0 - profile.values[static_cast<size_t>(i)];
        if (v <= floor_v) continue;
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
        if (x < 0.0) { lxl.push_back(std::log(axv)); lyl.push_back(std::log(v)); axl.push_back(axv); }
        else { lxr.push_back(std::log(axv)); lyr.push_back(std::log(v)); axr.push_back(axv); }
    }
    if (lxl.size() + lxr.size() < 30 || lxl.size() < 8 || lxr.size() < 8)
        throw std::runtime_error("fit_tail: too few tail samples");

    if (p.alpha == 2.0) {
        if (vmax / vmin < 31.6)
            throw std::runtime_error("fit_tail: tail window spans < 1.5 decades of value");
        LineFit el = fit_line(axl, lyl);  // log-linear: exponential tails
        LineFit er = fit_line(axr, lyr);
        LineFit pl = fit_line(lxl, lyl);
        LineFit pr = fit_line(lxr, lyr);
        tf.exponential = true;
        tf.exponent = 0.5 * (el.slope + er.slope);
        tf.amplitude = std::exp(0.5 * (el.intercept + er.intercept));
        tf.r2 = std::min(el.r2, er.r2);
        tf.power_r2 = std::max(pl.r2, pr.r2);
        return tf;
    }
    if (tf.window_hi / tf.window_lo < 2.0)
        throw std::runtime_error("fit_tail: tail window too short (front too wide for the domain)");
    LineFit fl = fit_line(lxl, lyl);
    LineFit fr = fit_line(lxr, lyr);
    tf.exponent_left = fl.slope;
    tf.exponent_right = fr.slope;
    tf.exponent = 0.5 * (fl.slope + fr.slope);
    tf.amplitude = std::exp(0.5 * (fl.intercept + fr.intercept));
    tf.r2 = std::min(fl.r2, fr.r2);
    return tf;
}

double profile_delta_star(const Bistable& b) {
    const double bt = beta(b);
    auto ok = [&](double d) {
        // min of -f' over [1-2d, 1+d] and [-d, 2d] both >= beta
        double m1 = 1e300, m2 = 1e300;
        for (int i = 0; i <= 200; ++i) {
            m1 = std::min(m1, -b.df(1.0 - 2.0 * d + 3.0 * d * i / 200.0));
            m2 = std::min(m2, -b.df(-d + 3.0 * d * i / 200.0));
        }
        return m1 >= bt && m2 >= bt;
    };
    double lo = 0.0, hi = 0.49;
    if (ok(hi)) return hi;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid)) lo = mid; else hi = mid;
    }
    return lo;
}

namespace {

std::vector<double> probe_times() {
    std::vector<double> ts;
    for (int i = 0; i < 13; ++i)
        ts.push_back(0.01 * std::pow(300.0, i / 12.0));  // log-spaced in (0.01, 3]
    return ts;
}

}  // namespace

std::pair<Certificate, Certificate> certify_profile(const WaveExtraction& w,
                                                    const Bistable& b, const RFParams& p,
                                                    double delta) {
    const double dstar = profile_delta_star(b);
    if (!(delta > 0.0) || delta > dstar)
        throw std::invalid_argument("certify_profile: need 0 < delta <= delta_star");
    const double bt = beta(b);
    const Grid& g = w.profile.grid;

    // M from the profile: U > 1 - delta_star beyond M, U < delta_star below -M
    const double xr = profile_crossing(w.profile, 1.0 - dstar);
    const double xl = profile_crossing(w.profile, dstar);
    const double M = std::max({std::abs(xr), std::abs(xl), 1.0}) + 2.0 * g.dx;

    // sup |f'| on [-1, 2]
    double fp_norm = 0.0;
    for (int i = 0; i <= 3000; ++i)
        fp_norm = std::max(fp_norm, std::abs(b.df(-1.0 + 3.0 * i / 3000.0)));

    // derivative field and its infimum on |y| <= M
    std::vector<double> du(static_cast<size_t>(g.n_points), 0.0);
    for (int i = 1; i + 1 < g.n_points; ++i)
        du[static_cast<size_t>(i)] = (w.profile.values[static_cast<size_t>(i + 1)] -
                                      w.profile.values[static_cast<size_t>(i - 1)]) /
                                     (2.0 * g.dx);
    double inf_du = 1e300;
    for (int i = 1; i + 1 < g.n_points; ++i)
        if (std::abs(g.x(i)) <= M) inf_du = std::min(inf_du, du[static_cast<size_t>(i)]);
    if (!(inf_du > 0.0))
        throw std::runtime_error("certify_profile: profile derivative not positive on [-M, M]");
    const double sigma = (fp_norm + bt) / (bt * inf_du);

    Field dU = apply(w.profile, p);
    const double tol = std::max(1e-5, 3.0 * w.residual_sup);
    if (tol > 10.0 * delta * bt)
        throw std::runtime_error(
            "certify_profile: extraction residual too large to certify at this delta");

    auto evaluate = [&](double sign) {
        Certificate c;
        c.kind = (sign > 0) ? CertificateKind::supersolution_profile
                            : CertificateKind::subsolution_profile;
        c.delta = delta;
        c.delta_star = dstar;
        c.sigma_star = sigma;
        c.beta = bt;
        c.M = M;
        c.tolerance = tol;
        double worst = 1e300;
        for (double t : probe_times()) {
            const double drift = sign * sigma * delta * (1.0 - std::exp(-bt * t));
            const double lift = sign * delta * std::exp(-bt * t);
            for (int ix = 0; ix <= 40; ++ix) {
                const double x = -0.5 * g.half_width + 0.5 * g.half_width * ix / 20.0;
                const double y = x - w.speed * t + drift;
                const double Uy = w.profile.value_at(y);
                const double Upy =
                    cubic_interp_uniform(du, -g.half_width, g.dx, std::clamp(y, -g.half_width, g.half_width));
                const double DUy = dU.value_at(y);
                const double wv = Uy + lift;
                const double dwdt =
                    Upy * (-w.speed + sign * sigma * delta * bt * std::exp(-bt * t)) -
                    sign * delta * bt * std::exp(-bt * t);
                const double N = dwdt - DUy - b.f(wv);
                worst = std::min(worst, sign * N);
                ++c.probe_count;
            }
        }
        c.worst_margin = worst;
        c.pass = worst >= -tol;
        return c;
    };

    return {evaluate(+1.0), evaluate(-1.0)};
}

std::pair<Certificate, Certificate> certify_ramp(const Bistable& b, const RFParams& p,
                                                 double delta) {
    if (!(p.alpha > 1.0 && p.alpha < 2.0))
        throw std::invalid_argument("certify_ramp: need 1 < alpha < 2");
    if (b.u_minus != 0.0 || b.u_plus != 1.0)
        throw std::invalid_argument("certify_ramp: reaction must be normalized to roots 0, 1");
    const double a = b.a;
    if (!(delta > 0.0) || delta > std::min(0.5 * a, 0.5 * (1.0 - a)))
        throw std::invalid_argument("certify_ramp: need 0 < delta <= min(a/2, (1-a)/2)");

    // zeta norms (quintic smoothstep over [0, 4])
    double z1 = 0.0, z2 = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double t = i / 4000.0;
        z1 = std::max(z1, smoothstep5_d1(t) / 4.0);
        z2 = std::max(z2, std::abs(smoothstep5_d2(t)) / 16.0);
    }
    const double K = estimate_constant(p);
    auto op_bound = [&](double eps) {
        // optimal-M split of the C^2_b estimate for the scaled ramp
        const double s1 = eps * z1, s2 = eps * eps * z2;
        const double M = 4.0 * s1 / s2;
        return K * (s2 * std::pow(M, 2.0 - p.alpha) / (2.0 - p.alpha) +
                    4.0 * s1 * std::pow(M, 1.0 - p.alpha) / (p.alpha - 1.0));
    };

    // reaction margins of the flat-ish regions (subsolution orientation)
    auto fmin_on = [&](double lo, double hi) {
        double m = 1e300;
        for (int i = 0; i <= 400; ++i) m = std::min(m, b.f(lo + (hi - lo) * i / 400.0));
        return m;
    };
    auto fmax_on = [&](double lo, double hi) {
        double m = -1e300;
        for (int i = 0; i <= 400; ++i) m = std::max(m, b.f(lo + (hi - lo) * i / 400.0));
        return m;
    };
    const double rho_sub = std::min(fmin_on(-delta, -0.5 * delta),
                                    fmin_on(a + 0.5 * delta, 1.0 - delta));
    const double rho_sup = std::min(-fmax_on(1.0 + 0.5 * delta, 1.0 + delta),
                                    -fmax_on(delta, a - 0.5 * delta));
    const double rho_flat = std::min(rho_sub, rho_sup);
    if (!(rho_flat > 0.0))
        throw std::runtime_error("certify_ramp: no reaction margin outside the mid band");

    // shrink epsilon until drift and operator terms sit below half the margin
    double eps = 0.1;
    for (int it = 0; it < 400; ++it) {
        if (eps + op_bound(eps) <= 0.5 * rho_flat) break;
        eps *= 0.8;
        if (it == 399) throw std::runtime_error("certify_ramp: no admissible epsilon found");
    }

    // mid-band slope floor of the quintic ramp between the needed levels
    auto zeta_slope_floor = [&](double lev_lo, double lev_hi) {
        double mn = 1e300;
        for (int i = 1; i < 4000; ++i) {
            const double t = i / 4000.0;
            const double lev = smoothstep5(t);
            if (lev >= lev_lo && lev <= lev_hi) mn = std::min(mn, smoothstep5_d1(t) / 4.0);
        }
        return mn;
    };
    const double A_min = a + 2.0 * delta;  // smallest ramp amplitude over time
    double fsup = 0.0;
    for (int i = 0; i <= 1000; ++i)
        fsup = std::max(fsup, std::abs(b.f(-delta + (1.0 + 2.0 * delta) * i / 1000.0)));
    const double lev_lo = 0.5 * delta;
    const double lev_hi = (a + 1.5 * delta) / A_min;
    const double slope_floor = zeta_slope_floor(lev_lo, std::min(lev_hi, 1.0 - 1e-6));
    const double Kspeed =
        1.1 * (eps + op_bound(eps) + fsup) / (eps * A_min * slope_floor);

    // numeric verification on the probe lattice, D zeta from its own grid;
    // the supersolution uses the reflected ramp, and reflection flips the
    // skewness: D_theta[zeta(-eps .)](x) = eps^alpha (D_{-theta} zeta)(-eps x)
    Grid zg = make_grid(16.0, 2048);
    Field zf = sample_field(
        zg, [](double x) { return smoothstep5(x / 4.0); }, 0.0, 1.0, 0.0);
    Field dz = apply(zf, p);
    Field dz_flip = apply(zf, make_rf_params(p.alpha, -p.theta));
    const double tol = 1e-5;

    auto evaluate = [&](double sign) {
        // sign +1: supersolution w+, sign -1: subsolution w-
        Certificate c;
        c.kind = (sign > 0) ? CertificateKind::supersolution_ramp
                            : CertificateKind::subsolution_ramp;
        c.delta = delta;
        c.epsilon = eps;
        c.K_speed = Kspeed;
        c.xi_anchor = 0.0;
        c.tolerance = tol;
        double worst = 1e300;
        const double ampl0 = (sign > 0) ? (a - 2.0 * delta) : (1.0 - a - 2.0 * delta);
        for (double t : probe_times()) {
            const double A = 1.0 - ampl0 * std::exp(-eps * t);
            const double dA = eps * ampl0 * std::exp(-eps * t);
            for (int ix = 0; ix <= 40; ++ix) {
                const double x = -40.0 + 80.0 * ix / 40.0;
                const double s = (sign > 0) ? -eps * (x + Kspeed * t)
                                            : eps * (x - Kspeed * t);
                const double zeta = smoothstep5(s / 4.0);
                const double zetap = smoothstep5_d1(s / 4.0) / 4.0;
                const double Dz = std::pow(eps, p.alpha) *
                                  (sign > 0 ? dz_flip.value_at(s) : dz.value_at(s));
                double wv, dwdt, Dw;
                if (sign > 0) {
                    wv = (1.0 + delta) - A * zeta;
                    dwdt = -dA * zeta - A * zetap * (-eps * Kspeed);
                    Dw = -A * Dz;
                } else {
                    wv = -delta + A * zeta;
                    dwdt = dA * zeta + A * zetap * (-eps * Kspeed);
                    Dw = A * Dz;
                }
                const double N = dwdt - Dw - b.f(wv);
                worst = std::min(worst, sign * N);
                ++c.probe_count;
            }
        }
        c.worst_margin = worst;
        c.pass = worst >= -tol;
        return c;
    };

    return {evaluate(+1.0), evaluate(-1.0)};
}

UniquenessReport uniqueness_check(const RFParams& p, const Bistable& b, const Field& seed1,
                                  const Field& seed2, const SolverConfig& cfg,
                                  const ExtractOptions& opt) {
    for (const Field* s : {&seed1, &seed2}) {
        if (!(s->tail_left < b.a) || !(s->tail_right > b.a))
            throw std::invalid_argument(
                "uniqueness_check: seed violates the liminf/limsup conditions around a");
    }
    UniquenessReport rep;
    rep.first = extract_wave(evolve(seed1, b, p, cfg), b, p, opt);
    rep.second = extract_wave(evolve(seed2, b, p, cfg), b, p, opt);
    rep.speed_gap = std::abs(rep.first.speed - rep.second.speed);

    const Grid& g = rep.first.profile.grid;
    auto dist = [&](double s) {
        double m = 0.0;
        for (int i = 0; i < g.n_points; ++i) {
            const double x = g.x(i);
            if (std::abs(x) > 0.7 * g.half_width) continue;
            m = std::max(m, std::abs(rep.first.profile.values[static_cast<size_t>(i)] -
                                     rep.second.profile.value_at(x + s)));
        }
        return m;
    };
    double best_s = 0.0, best = dist(0.0);
    for (double s = -4.0; s <= 4.0; s += 0.05) {
        const double d = dist(s);
        if (d < best) { best = d; best_s = s; }
    }
    best_s = golden_min(best_s - 0.1, best_s + 0.1, dist);
    rep.shift = best_s;
    rep.aligned_distance = dist(best_s);
    return rep;
}

StabilityFit stability_experiment(const WaveExtraction& w, const Field& perturbation,
                                  const Bistable& b, const RFParams& p, double T,
                                  SolverConfig cfg) {
    const Grid& g = w.profile.grid;
    if (perturbation.grid != g)
        throw std::invalid_argument("stability_experiment: perturbation grid mismatch");
    std::vector<double> u0(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i)
        u0[static_cast<size_t>(i)] =
            std::clamp(w.profile.values[static_cast<size_t>(i)] +
                           perturbation.values[static_cast<size_t>(i)],
                       0.0, 1.0);
    Field start = make_field(g, std::move(u0), 0.0, 1.0, std::max(w.profile.tail_tol, 1e-5));
    if (!(start.value_at(-0.9 * g.half_width) < b.a) ||
        !(start.value_at(0.9 * g.half_width) > b.a))
        throw std::invalid_argument(
            "stability_experiment: perturbed datum violates the liminf/limsup conditions");

    cfg.T = T;
    Trajectory traj = evolve(start, b, p, cfg);

    StabilityFit fit;
    auto dist_at = [&](const Field& u, double shift) {
        double m = 0.0;
        for (int i = 0; i < g.n_points; ++i) {
            const double x = g.x(i);
            if (std::abs(x) > 0.8 * g.half_width) continue;
            m = std::max(m, std::abs(u.values[static_cast<size_t>(i)] -
                                     w.profile.value_at(x - shift)));
        }
        return m;
    };
    double shift_prev = 0.0;
    std::vector<double> shifts;
    for (size_t s = 0; s < traj.snapshots.size(); ++s) {
        const Field& u = traj.snapshots[s];
        auto d = [&](double sh) { return dist_at(u, sh); };
        double best = shift_prev, bd = d(best);
        const double center = w.speed * traj.times[s];
        for (double sh = center - 2.0; sh <= center + 2.0; sh += 0.05) {
            const double dd = d(sh);
            if (dd < bd) { bd = dd; best = sh; }
        }
        best = golden_min(best - 0.1, best + 0.1, d);
        shift_prev = best;
        shifts.push_back(best);
        fit.distances.emplace_back(traj.times[s], d(best));
    }

    const double s0 = fit.distances.front().second;
    if (s0 <= 1e-6) {
        fit.already_converged = true;
        fit.shift_xi = w.speed * traj.times.back() - shifts.back();
        return fit;
    }
    double floor = 1e300;
    size_t idx_min = 0;
    for (size_t i = 0; i < fit.distances.size(); ++i) {
        if (fit.distances[i].second < floor) {
            floor = fit.distances[i].second;
            idx_min = i;
        }
    }
    if (fit.distances.back().second >= 0.99 * s0)
        throw std::runtime_error("stability_experiment: no convergence toward the wave");

    // fit only the descending branch: past its minimum the distance re-rises
    // to the extraction-error plateau of the reference profile
    const double lo_cut = std::max(1e-6, 3.0 * floor);
    const double hi_cut = 0.5 * s0;
    std::vector<double> ft, fy;
    for (size_t i = 0; i <= idx_min; ++i) {
        const auto& d = fit.distances[i];
        if (d.second <= hi_cut && d.second >= lo_cut) {
            ft.push_back(d.first);
            fy.push_back(std::log(d.second));
        }
    }
    if (ft.size() >= 5) {
        LineFit lf = fit_line(ft, fy);
        fit.kappa = -lf.slope;
        fit.prefactor = std::exp(lf.intercept);
        fit.r2 = lf.r2;
    }
    fit.shift_xi = w.speed * traj.times.back() - shifts.back();
    return fit;
}

WaveExtraction run_wave(const Bistable& b, const RFParams& p, const WaveRunOptions& opt) {
    double L = opt.half_width;
    if (L <= 0.0) L = (p.alpha <= 1.3) ? 160.0 : 80.0;
    Grid g = make_grid(L, opt.n_points);
    Field u0 = initial_zeta(g);
    SolverConfig cfg;
    cfg.dt = opt.dt;
    cfg.T = opt.T;
    cfg.snapshot_stride = std::max(1, static_cast<int>(std::llround(0.1 / opt.dt)));
    Trajectory traj = evolve(u0, b, p, cfg);
    ExtractOptions eo;
    eo.settle_fraction = opt.settle_fraction;
    return extract_wave(traj, b, p, eo);
}

}  // namespace rfwave
