#include "rfwave/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rfwave/numerics.hpp"
#include "rfwave/spectral.hpp"

namespace rfwave {
namespace {

using cplx = std::complex<double>;

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2; series near 0.
cplx phi1(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term{1.0, 0.0}, sum{1.0, 0.0};
        for (int k = 1; k <= 16; ++k) {
            term *= z / static_cast<double>(k + 1);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

cplx phi2(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term{0.5, 0.0}, sum{0.5, 0.0};
        for (int k = 1; k <= 16; ++k) {
            term *= z / static_cast<double>(k + 2);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

struct Reaction {
    const Bistable* base = nullptr;
    const ClampedBistable* clamped = nullptr;
    bool linear = false;

    double operator()(double u) const {
        if (linear) return 0.0;
        return clamped ? clamped->f(u) : base->f(u);
    }
};

// one RK4 step of u' = f(u)
double rk4_step(const Reaction& f, double u, double h) {
    const double k1 = f(u);
    const double k2 = f(u + 0.5 * h * k1);
    const double k3 = f(u + 0.5 * h * k2);
    const double k4 = f(u + h * k3);
    return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory evolve(const Field& u0, const Bistable& b, const RFParams& p,
                  const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.T >= cfg.dt) || cfg.snapshot_stride < 1)
        throw std::invalid_argument("evolve: bad solver config");
    if (!cfg.linear_only && !(p.alpha > 1.0))
        throw std::invalid_argument("evolve: reaction solver needs alpha > 1");
    if (cfg.linear_only && !(p.alpha >= 1.0))
        throw std::invalid_argument("evolve: need alpha >= 1");
    if (!u0.tails_settled()) throw std::invalid_argument("evolve: initial tails not settled");
    if (!cfg.linear_only) {
        const double lo = b.u_minus - 0.5, hi = b.u_plus + 0.5;
        for (double v : u0.values)
            if (v < lo || v > hi)
                throw std::invalid_argument("evolve: initial data leaves [u_minus-0.5, u_plus+0.5]");
    }

    const Grid& g = u0.grid;
    const int n = g.n_points;
    ClampedBistable fb;
    Reaction reaction;
    reaction.linear = cfg.linear_only;
    reaction.base = &b;
    if (!cfg.linear_only && cfg.clamp_reaction) {
        fb = clamp(b);
        reaction.clamped = &fb;
    }

    SpectralGrid sg(g);
    const int nf = sg.n_fft();
    std::vector<cplx> stepE(static_cast<size_t>(nf)), stepP1(static_cast<size_t>(nf)),
        stepP2(static_cast<size_t>(nf));
    for (int j = 0; j < nf; ++j) {
        const cplx z = cfg.dt * grid_symbol(p, sg, j);
        stepE[static_cast<size_t>(j)] = std::exp(z);
        stepP1[static_cast<size_t>(j)] = cfg.dt * phi1(z);
        stepP2[static_cast<size_t>(j)] = cfg.dt * phi2(z);
    }

    // fixed shapes: reference ramp and its operator action
    std::vector<double> ramp(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ramp[static_cast<size_t>(i)] = reference_ramp(g, g.x(i));
    auto dramp = background_operator_action(g, p);

    double tl = u0.tail_left, tr = u0.tail_right;
    auto background = [&](int i, double a, double c) {
        return a + (c - a) * ramp[static_cast<size_t>(i)];
    };
    auto forcing = [&](const std::vector<double>& u, double a, double c,
                       std::vector<double>& out) {
        const double fa = reaction(a), fc = reaction(c);
        const double amp = c - a;
        for (int i = 0; i < n; ++i)
            out[static_cast<size_t>(i)] = amp * (*dramp)[static_cast<size_t>(i)] +
                                          reaction(u[static_cast<size_t>(i)]) -
                                          (fa + (fc - fa) * ramp[static_cast<size_t>(i)]);
    };

    // initial perturbation spectrum
    std::vector<double> u(u0.values), w(static_cast<size_t>(n)), gn(static_cast<size_t>(n)),
        ga(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = u[static_cast<size_t>(i)] - background(i, tl, tr);
    std::vector<cplx> what = sg.analyze(w);
    std::vector<cplx> ghat_n, ghat_a, acc(static_cast<size_t>(nf));

    const int n_steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    Trajectory traj;
    traj.times.reserve(static_cast<size_t>(n_steps / cfg.snapshot_stride + 2));
    traj.log.reserve(static_cast<size_t>(n_steps + 1));

    auto snapshot = [&](double t) {
        double mism = std::max(std::abs(u.front() - tl), std::abs(u.back() - tr));
        const double gap = std::abs(tr - tl);
        const double tol = std::max(1e-6, 2.0 * mism / std::max(gap, 1e-30));
        traj.times.push_back(t);
        traj.snapshots.push_back(make_field(g, u, tl, tr, gap > 0.0 ? tol : std::max(1e-6, 2.0 * mism)));
    };
    auto log_state = [&](double t) {
        StepLog s;
        s.t = t;
        s.sup = *std::max_element(u.begin(), u.end());
        s.inf = *std::min_element(u.begin(), u.end());
        s.tail_left = tl;
        s.tail_right = tr;
        traj.log.push_back(s);
        // negated comparisons so NaN states also abort
        if (!cfg.linear_only && (!(s.sup <= b.u_plus + 1.0) || !(s.inf >= b.u_minus - 1.0)))
            throw std::runtime_error("evolve: solution blew out of [u_minus-1, u_plus+1] (check dt/clamping)");
    };

    snapshot(0.0);
    log_state(0.0);

    for (int step = 0; step < n_steps; ++step) {
        forcing(u, tl, tr, gn);
        ghat_n = sg.analyze(gn);
        for (int j = 0; j < nf; ++j)
            acc[static_cast<size_t>(j)] = stepE[static_cast<size_t>(j)] * what[static_cast<size_t>(j)] +
                                          stepP1[static_cast<size_t>(j)] * ghat_n[static_cast<size_t>(j)];
        // advance tails along the far-field equation
        const double tl1 = reaction.linear ? tl : rk4_step(reaction, tl, cfg.dt);
        const double tr1 = reaction.linear ? tr : rk4_step(reaction, tr, cfg.dt);

        if (cfg.scheme == Scheme::etd2rk) {
            std::vector<double> wa = sg.synthesize(acc);
            for (int i = 0; i < n; ++i)
                ga[static_cast<size_t>(i)] = wa[static_cast<size_t>(i)] + background(i, tl1, tr1);
            forcing(ga, tl1, tr1, ga);
            ghat_a = sg.analyze(ga);
            for (int j = 0; j < nf; ++j)
                acc[static_cast<size_t>(j)] +=
                    stepP2[static_cast<size_t>(j)] *
                    (ghat_a[static_cast<size_t>(j)] - ghat_n[static_cast<size_t>(j)]);
        }
        what = acc;
        tl = tl1;
        tr = tr1;
        w = sg.synthesize(what);
        for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] + background(i, tl, tr);

        const double t = (step + 1) * cfg.dt;
        log_state(t);
        if ((step + 1) % cfg.snapshot_stride == 0 || step + 1 == n_steps) snapshot(t);
    }
    return traj;
}

PicardResult picard_iterate(const Field& u0, const Bistable& b, const RFParams& p,
                            double T, int n_iter) {
    if (!(T > 0.0) || T > 0.5)
        throw std::invalid_argument("picard_iterate: contraction horizon is T in (0, 0.5]");
    if (n_iter < 1) throw std::invalid_argument("picard_iterate: need n_iter >= 1");
    if (!u0.tails_settled()) throw std::invalid_argument("picard_iterate: tails not settled");
    ClampedBistable fb = clamp(b);
    if (std::abs(fb.f(u0.tail_left)) > 1e-12 || std::abs(fb.f(u0.tail_right)) > 1e-12)
        throw std::invalid_argument("picard_iterate: tails must sit at reaction roots");

    const Grid& g = u0.grid;
    const int n = g.n_points;
    const int n_tau = 64;
    const double h = T / n_tau;

    SpectralGrid sg(g);
    const int nf = sg.n_fft();

    std::vector<double> ramp(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ramp[static_cast<size_t>(i)] = reference_ramp(g, g.x(i));
    auto dramp = background_operator_action(g, p);
    const double tl = u0.tail_left, tr = u0.tail_right, amp = tr - tl;

    std::vector<double> w0(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        w0[static_cast<size_t>(i)] =
            u0.values[static_cast<size_t>(i)] - (tl + amp * ramp[static_cast<size_t>(i)]);
    std::vector<cplx> w0hat = sg.analyze(w0);
    std::vector<double> db(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) db[static_cast<size_t>(i)] = amp * (*dramp)[static_cast<size_t>(i)];
    std::vector<cplx> dbhat = sg.analyze(db);

    // semigroup multipliers at all node gaps
    std::vector<std::vector<cplx>> expm(static_cast<size_t>(n_tau + 1));
    for (int d = 0; d <= n_tau; ++d) {
        expm[static_cast<size_t>(d)].resize(static_cast<size_t>(nf));
        for (int j = 0; j < nf; ++j)
            expm[static_cast<size_t>(d)][static_cast<size_t>(j)] = std::exp(d * h * grid_symbol(p, sg, j));
    }

    // homogeneous part S_tau u0 = B + e^{tau psi} w0 + tau phi1(tau psi) DB
    std::vector<std::vector<double>> base(static_cast<size_t>(n_tau + 1));
    for (int d = 0; d <= n_tau; ++d) {
        std::vector<cplx> acc(static_cast<size_t>(nf));
        for (int j = 0; j < nf; ++j) {
            const cplx z = d * h * grid_symbol(p, sg, j);
            acc[static_cast<size_t>(j)] =
                expm[static_cast<size_t>(d)][static_cast<size_t>(j)] * w0hat[static_cast<size_t>(j)] +
                (d * h) * phi1(z) * dbhat[static_cast<size_t>(j)];
        }
        base[static_cast<size_t>(d)] = sg.synthesize(acc);
        for (int i = 0; i < n; ++i)
            base[static_cast<size_t>(d)][static_cast<size_t>(i)] += tl + amp * ramp[static_cast<size_t>(i)];
    }

    std::vector<std::vector<double>> uk = base;  // iterate 0: homogeneous flow
    PicardResult res;
    std::vector<double> prev_final = uk.back();

    for (int sweep = 0; sweep < n_iter; ++sweep) {
        // transforms of the reaction at every time node
        std::vector<std::vector<cplx>> fhat(static_cast<size_t>(n_tau + 1));
        std::vector<double> fval(static_cast<size_t>(n));
        for (int d = 0; d <= n_tau; ++d) {
            for (int i = 0; i < n; ++i)
                fval[static_cast<size_t>(i)] = fb.f(uk[static_cast<size_t>(d)][static_cast<size_t>(i)]);
            fhat[static_cast<size_t>(d)] = sg.analyze(fval);
        }
        std::vector<std::vector<double>> un(static_cast<size_t>(n_tau + 1));
        un[0] = base[0];
        std::vector<cplx> acc(static_cast<size_t>(nf));
        for (int d = 1; d <= n_tau; ++d) {
            std::fill(acc.begin(), acc.end(), cplx{0.0, 0.0});
            for (int j2 = 0; j2 <= d; ++j2) {
                const double wq = (j2 == 0 || j2 == d) ? 0.5 * h : h;
                const auto& em = expm[static_cast<size_t>(d - j2)];
                const auto& fj = fhat[static_cast<size_t>(j2)];
                for (int j = 0; j < nf; ++j)
                    acc[static_cast<size_t>(j)] += wq * em[static_cast<size_t>(j)] * fj[static_cast<size_t>(j)];
            }
            un[static_cast<size_t>(d)] = sg.synthesize(acc);
            for (int i = 0; i < n; ++i)
                un[static_cast<size_t>(d)][static_cast<size_t>(i)] += base[static_cast<size_t>(d)][static_cast<size_t>(i)];
        }
        uk = std::move(un);
        double gap = 0.0;
        for (int i = 0; i < n; ++i)
            gap = std::max(gap, std::abs(uk.back()[static_cast<size_t>(i)] - prev_final[static_cast<size_t>(i)]));
        res.iterate_gaps.push_back(gap);
        prev_final = uk.back();
        if (res.iterate_gaps.size() >= 3) {
            const size_t s = res.iterate_gaps.size();
            if (res.iterate_gaps[s - 1] > 2.0 * res.iterate_gaps[s - 2] &&
                res.iterate_gaps[s - 2] > 2.0 * res.iterate_gaps[s - 3])
                throw std::runtime_error("picard_iterate: successive iterates diverging");
        }
    }
    res.u = make_field(g, uk.back(), tl, tr, std::max(u0.tail_tol, 1e-6));
    return res;
}

double eta_lower_bound(double m, double t, double K2, const KernelTable& k) {
    if (!(t > 0.0)) throw std::invalid_argument("eta_lower_bound: need t > 0");
    if (m < 0.0) throw std::invalid_argument("eta_lower_bound: need m >= 0");
    double mn = k.eval(m, t);
    const int N = 400;
    for (int i = 0; i <= N; ++i) {
        const double z = -m - 1.0 + (2.0 * m + 1.0) * i / N;
        mn = std::min(mn, k.eval(z, t));
    }
    return std::exp(-K2 * t) * mn;
}

ComparisonReport compare_evolutions(const Field& u0, const Field& v0, const Bistable& b,
                                    const RFParams& p, const SolverConfig& cfg,
                                    const KernelTable& k,
                                    const std::vector<double>& probe_xs,
                                    const std::vector<double>& probe_ts) {
    if (u0.grid != v0.grid) throw std::invalid_argument("compare_evolutions: grid mismatch");
    for (int i = 0; i < u0.grid.n_points; ++i)
        if (u0.values[static_cast<size_t>(i)] > v0.values[static_cast<size_t>(i)] + 1e-14)
            throw std::invalid_argument("compare_evolutions: need u0 <= v0 pointwise");

    Trajectory tu = evolve(u0, b, p, cfg);
    Trajectory tv = evolve(v0, b, p, cfg);

    ComparisonReport rep;
    rep.snapshot_times = tu.times;
    rep.min_gap.resize(tu.times.size());
    for (size_t s = 0; s < tu.times.size(); ++s) {
        double mg = tv.snapshots[s].values[0] - tu.snapshots[s].values[0];
        for (int i = 0; i < u0.grid.n_points; ++i)
            mg = std::min(mg, tv.snapshots[s].values[static_cast<size_t>(i)] -
                                  tu.snapshots[s].values[static_cast<size_t>(i)]);
        rep.min_gap[static_cast<size_t>(s)] = mg;
    }

    // integral over [0,1] of the initial gap
    double mass = 0.0;
    const int nq = 200;
    for (int i = 0; i < nq; ++i) {
        const double y0 = static_cast<double>(i) / nq, y1 = static_cast<double>(i + 1) / nq;
        const double f0 = v0.value_at(y0) - u0.value_at(y0);
        const double f1 = v0.value_at(y1) - u0.value_at(y1);
        mass += 0.5 * (y1 - y0) * (f0 + f1);
    }
    rep.initial_mass = mass;

    // K2: sup of |f'| along both evolutions (plus 1), scanned on the seen range
    ClampedBistable fb = clamp(b);
    double lo = 0.0, hi = 1.0;
    for (const auto& L : tu.log) { lo = std::min(lo, L.inf); hi = std::max(hi, L.sup); }
    for (const auto& L : tv.log) { lo = std::min(lo, L.inf); hi = std::max(hi, L.sup); }
    double sup_df = 0.0;
    const double hd = 1e-5;
    for (int i = 0; i <= 2000; ++i) {
        const double uu = lo + (hi - lo) * i / 2000.0;
        sup_df = std::max(sup_df, std::abs(fb.f(uu + hd) - fb.f(uu - hd)) / (2.0 * hd));
    }
    rep.K2 = sup_df + 1.0;

    for (double pt : probe_ts) {
        // snapshot closest to the probe time
        size_t s = 0;
        for (size_t i = 0; i < tu.times.size(); ++i)
            if (std::abs(tu.times[i] - pt) < std::abs(tu.times[s] - pt)) s = i;
        for (double px : probe_xs) {
            OrderingProbe pr;
            pr.x = px;
            pr.t = tu.times[s];
            pr.gap = tv.snapshots[s].value_at(px) - tu.snapshots[s].value_at(px);
            pr.eta_bound = eta_lower_bound(std::abs(px), pr.t, rep.K2, k) * mass;
            pr.pass = pr.gap >= pr.eta_bound - 1e-12;
            rep.probes.push_back(pr);
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> far_field_ode(double u_limit, const Bistable& b,
                                                     double T) {
    const double h = 1e-3;
    std::vector<std::pair<double, double>> out;
    double u = u_limit, t = 0.0;
    out.emplace_back(t, u);
    const int n = static_cast<int>(std::llround(T / h));
    Reaction f;
    f.base = &b;
    for (int i = 0; i < n; ++i) {
        u = rk4_step(f, u, h);
        t = (i + 1) * h;
        if ((i + 1) % 10 == 0 || i + 1 == n) out.emplace_back(t, u);
    }
    return out;
}

}  // namespace rfwave
