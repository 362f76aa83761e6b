#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rfwave/numerics.hpp"
#include "rfwave/wave_lab.hpp"

using namespace rfwave;

namespace {

WaveExtraction nagumo_wave(double a = 0.3) {
    WaveRunOptions o;
    o.half_width = 40.0;
    o.n_points = 2048;
    o.dt = 1e-2;
    o.T = 30.0;
    o.settle_fraction = 0.3;
    return run_wave(make_cubic(a), make_rf_params(2.0, 0.0), o);
}

WaveExtraction frac_wave(double a, double theta, double T = 30.0) {
    WaveRunOptions o;
    o.half_width = 80.0;
    o.n_points = 4096;
    o.dt = 1e-2;
    o.T = T;
    o.settle_fraction = 0.3;
    return run_wave(make_cubic(a), make_rf_params(1.5, theta), o);
}

}  // namespace

TEST_CASE("initial zeta satisfies the ramp constraints") {
    Grid g = make_grid(40.0, 4096);
    Field z = initial_zeta(g);
    CHECK(z.value_at(0.0) == doctest::Approx(0.5).epsilon(1e-12));  // s = 2 midpoint
    CHECK(std::abs(z.value_at(-2.0)) <= 1e-7);   // off-node: interpolation only
    CHECK(std::abs(1.0 - z.value_at(2.0)) <= 1e-7);
    CHECK(z.value_at(-5.0) == 0.0);
    CHECK(z.value_at(5.0) == 1.0);
    double d1 = 0.0, d2 = 0.0;
    for (int i = 1; i + 1 < g.n_points; ++i) {
        const double up = (z.values[static_cast<size_t>(i + 1)] -
                           z.values[static_cast<size_t>(i - 1)]) / (2.0 * g.dx);
        const double upp = (z.values[static_cast<size_t>(i + 1)] -
                            2.0 * z.values[static_cast<size_t>(i)] +
                            z.values[static_cast<size_t>(i - 1)]) / (g.dx * g.dx);
        d1 = std::max(d1, up);
        d2 = std::max(d2, std::abs(upp));
    }
    CHECK(d1 == doctest::Approx(0.46875).epsilon(1e-3));
    CHECK(d1 < 1.0);
    CHECK(d2 <= 0.37);
    CHECK_THROWS_AS(initial_zeta(make_grid(6.0, 64)), std::invalid_argument);
}

TEST_CASE("track_level follows a rigid translate exactly") {
    Grid g = make_grid(40.0, 8192);
    Trajectory traj;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        traj.times.push_back(t);
        traj.snapshots.push_back(sample_field(
            g, [&](double x) { return smoothstep5((x - t + 2.0) / 4.0); }, 0.0, 1.0, 0.0));
    }
    auto z = track_level(traj, 0.5);
    for (size_t s = 0; s < z.size(); ++s)
        CHECK(z[s].second - z[0].second == doctest::Approx(traj.times[s]).epsilon(1e-8));

    // non-monotone snapshot rejected
    Trajectory bad;
    bad.times.push_back(0.0);
    bad.snapshots.push_back(sample_field(
        g, [](double x) { return 0.5 + 0.49 * std::sin(0.3 * x); }, 0.1, 0.9, 1e9));
    CHECK_THROWS_AS(track_level(bad, 0.5), std::runtime_error);
}

TEST_CASE("classical wave: speed, profile shape, exponential tails") {
    WaveExtraction w = nagumo_wave();
    const double c_exact = (2.0 * 0.3 - 1.0) / std::sqrt(2.0);  // -0.282842712
    CHECK(std::abs(w.speed - c_exact) <= 0.01 * std::abs(c_exact));
    CHECK(w.monotonicity_defect >= -1e-8);
    CHECK(std::abs(w.profile.value_at(0.0) - 0.3) <= 1e-6);
    CHECK(w.speed_fit_r2 >= 0.999);
    CHECK(w.residual_sup < 0.05);

    // measured speed agrees with the integral formula and the sign law
    const double cf = speed_from_formula(w, make_cubic(0.3));
    CHECK(std::abs(cf - w.speed) <= 0.05 * std::abs(w.speed));
    CHECK(predicted_speed_sign(make_cubic(0.3)) == -1);
    CHECK(w.speed < 0.0);

    // alpha = 2: exponential tails, power law loses
    CHECK(w.tail.exponential);
    CHECK(w.tail.r2 >= 0.99);
    CHECK(w.tail.r2 > w.tail.power_r2);
}

TEST_CASE("speed formula on the exact logistic profile") {
    Grid g = make_grid(40.0, 4096);
    WaveExtraction w;
    w.params = make_rf_params(2.0, 0.0);
    w.profile = sample_field(
        g, [](double x) { return 1.0 / (1.0 + std::exp(-x / std::sqrt(2.0))); }, 0.0, 1.0);
    const double cf = speed_from_formula(w, make_cubic(0.3));
    CHECK(cf == doctest::Approx(-0.2828427).epsilon(1e-4));

    CHECK(speed_from_formula(w, make_cubic(0.5)) == 0.0);

    w.params = make_rf_params(1.5, 0.25);
    CHECK_THROWS_AS(speed_from_formula(w, make_cubic(0.3)), std::invalid_argument);
}

TEST_CASE("balanced potential: standing wave") {
    WaveRunOptions o;
    o.half_width = 40.0;
    o.n_points = 2048;
    o.dt = 1e-2;
    o.T = 20.0;
    WaveExtraction w = run_wave(make_cubic(0.5), make_rf_params(1.5, 0.0), o);
    CHECK(std::abs(w.speed) <= 1e-3);
    CHECK(w.monotonicity_defect >= -1e-8);
}

TEST_CASE("fractional wave: power-law tails and the speed bound") {
    WaveExtraction w = frac_wave(0.3, 0.0, 60.0);
    CHECK(w.monotonicity_defect >= -1e-8);
    CHECK(std::abs(w.profile.value_at(0.0) - 0.3) <= 1e-6);
    CHECK(!w.tail.exponential);
    CHECK(w.tail.exponent == doctest::Approx(-1.5).epsilon(0.2 / 1.5));
    CHECK(w.tail.amplitude > 0.0);
    // moving front: the finite-window slopes of the two sides differ by the
    // O(|xi|^-1) correction whose coefficient involves c and f'(u_pm)
    CHECK(std::abs(w.tail.exponent_left - w.tail.exponent_right) <= 0.25);

    const double cb = speed_bound(make_cubic(0.3), w.params);
    CHECK(cb > 0.0);
    CHECK(std::abs(w.speed) <= cb);
    const double cb5 = speed_bound(make_cubic(0.5), make_rf_params(1.5, 0.0));
    CHECK(cb5 > 0.0);

    const double cf = speed_from_formula(w, make_cubic(0.3));
    CHECK(std::abs(cf - w.speed) <= 0.05 * std::abs(w.speed));
}

TEST_CASE("balanced standing wave has mirror-symmetric tails") {
    Grid g = make_grid(80.0, 4096);
    Bistable b = make_cubic(0.5);
    RFParams p = make_rf_params(1.5, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.T = 30.0;
    cfg.snapshot_stride = 10;
    Trajectory traj = evolve(initial_zeta(g), b, p, cfg);
    WaveExtraction w = extract_wave(traj, b, p);
    CHECK(std::abs(w.speed) <= 1e-3);
    CHECK(!w.tail.exponential);
    // the standing symmetric case is where the two sides genuinely match
    CHECK(std::abs(w.tail.exponent_left - w.tail.exponent_right) <= 0.15);
    CHECK(w.tail.amplitude > 0.0);

    // non-spreading front: the width z(0.95,t) - z(0.05,t) admits a bound
    // over the whole run (measured, not prescribed)
    auto zlo = track_level(traj, 0.05);
    auto zhi = track_level(traj, 0.95);
    double width_end = zhi.back().second - zlo.back().second;
    for (size_t s = 0; s < traj.times.size(); ++s) {
        if (traj.times[s] < 1.0) continue;
        const double width = zhi[s].second - zlo[s].second;
        CHECK(width > 0.0);
        CHECK(width <= 1.5 * width_end);
    }
}

TEST_CASE("skew reversal mirrors the speed") {
    WaveExtraction wp = frac_wave(0.3, 0.25);
    WaveExtraction wm = frac_wave(0.7, -0.25);
    CHECK(wp.speed == doctest::Approx(-wm.speed).epsilon(0.02));
}

TEST_CASE("extraction is translation invariant and deterministic") {
    Grid g = make_grid(40.0, 2048);
    Bistable b = make_cubic(0.3);
    RFParams p = make_rf_params(2.0, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.T = 20.0;
    cfg.snapshot_stride = 10;

    Field s0 = initial_zeta(g);
    Field s1 = shift_interpolate(s0, 1.5);
    s1.tail_tol = 1e-5;
    Trajectory t0 = evolve(s0, b, p, cfg);
    Trajectory t0b = evolve(s0, b, p, cfg);
    // determinism: bit-identical repeat
    for (size_t s = 0; s < t0.snapshots.size(); ++s)
        for (size_t i = 0; i < t0.snapshots[s].values.size(); ++i)
            CHECK(t0.snapshots[s].values[i] == t0b.snapshots[s].values[i]);

    ExtractOptions eo;
    eo.settle_fraction = 0.3;
    WaveExtraction w0 = extract_wave(t0, b, p, eo);
    WaveExtraction w1 = extract_wave(evolve(s1, b, p, cfg), b, p, eo);
    CHECK(std::abs(w0.speed - w1.speed) <= 1e-6);
    double dist = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
        if (std::abs(g.x(i)) > 0.6 * g.half_width) continue;
        dist = std::max(dist, std::abs(w0.profile.values[static_cast<size_t>(i)] -
                                       w1.profile.values[static_cast<size_t>(i)]));
    }
    CHECK(dist <= 1e-6);
}

TEST_CASE("profile certificates at alpha = 2") {
    WaveExtraction w = nagumo_wave();
    Bistable b = make_cubic(0.3);
    const double dstar = profile_delta_star(b);
    CHECK(dstar > 0.0);
    CHECK(dstar < 0.5);
    // the selection inequalities hold at delta_star by construction
    const double bt = beta(b);
    for (int i = 0; i <= 100; ++i) {
        CHECK(-b.df(1.0 - 2.0 * dstar + 3.0 * dstar * i / 100.0) >= bt - 1e-9);
        CHECK(-b.df(-dstar + 3.0 * dstar * i / 100.0) >= bt - 1e-9);
    }

    auto [sup, sub] = certify_profile(w, b, w.params, 0.5 * dstar);
    CHECK(sup.pass);
    CHECK(sub.pass);
    CHECK(sup.probe_count == 13 * 41);
    CHECK(sup.sigma_star > 0.0);
    CHECK(sup.M >= 1.0);
    // independent re-check of (A:M): the profile is past 1-delta_star at M
    CHECK(w.profile.value_at(sup.M) > 1.0 - dstar);
    CHECK(w.profile.value_at(-sup.M) < dstar);
    // and of (A:sigma*)
    double inf_du = 1e300;
    const Grid& g = w.profile.grid;
    for (int i = 1; i + 1 < g.n_points; ++i)
        if (std::abs(g.x(i)) <= sup.M)
            inf_du = std::min(inf_du, (w.profile.values[static_cast<size_t>(i + 1)] -
                                       w.profile.values[static_cast<size_t>(i - 1)]) /
                                          (2.0 * g.dx));
    double fpn = 0.0;
    for (int i = 0; i <= 1000; ++i) fpn = std::max(fpn, std::abs(b.df(-1.0 + 3.0 * i / 1000.0)));
    CHECK(sup.sigma_star >= (fpn + bt) / (bt * inf_du) - 1e-9);

    CHECK_THROWS_AS(certify_profile(w, b, w.params, 2.0 * dstar), std::invalid_argument);

    // a profile that is not a wave carries a large residual and is refused
    WaveExtraction fake = w;
    fake.profile = initial_zeta(w.profile.grid);
    fake.speed = 0.0;
    fake.residual_sup = 0.1;
    CHECK_THROWS_AS(certify_profile(fake, b, w.params, 0.5 * dstar), std::runtime_error);
}

TEST_CASE("ramp certificates need no extraction") {
    Bistable b = make_cubic(0.3);
    RFParams p = make_rf_params(1.5, 0.0);
    auto [sup, sub] = certify_ramp(b, p, 0.1);
    CHECK(sup.pass);
    CHECK(sub.pass);
    CHECK(sup.epsilon > 0.0);
    CHECK(sup.K_speed > 0.0);
    CHECK(sup.tolerance == 1e-5);
    CHECK(sub.worst_margin >= -1e-5);

    CHECK_THROWS_AS(certify_ramp(b, p, 0.2), std::invalid_argument);  // > a/2
    CHECK_THROWS_AS(certify_ramp(b, make_rf_params(2.0, 0.0), 0.1), std::invalid_argument);
}

TEST_CASE("uniqueness: two seeds, one wave") {
    Grid g = make_grid(80.0, 4096);
    Bistable b = make_cubic(0.3);
    RFParams p = make_rf_params(1.5, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.T = 40.0;
    cfg.snapshot_stride = 20;
    ExtractOptions eo;
    eo.settle_fraction = 0.5;

    Field s1 = initial_zeta(g);
    Field s2 = sample_field(g, [](double x) { return 0.5 * (1.0 + std::tanh(1.2 * x)); },
                            0.0, 1.0, 1e-5);
    UniquenessReport rep = uniqueness_check(p, b, s1, s2, cfg, eo);
    CHECK(rep.speed_gap <= 1e-3);
    CHECK(rep.aligned_distance <= 1e-3);

    Field bad = sample_field(g, [](double) { return 0.3; }, 0.3, 0.3);
    CHECK_THROWS_AS(uniqueness_check(p, b, bad, s2, cfg, eo), std::invalid_argument);
}

TEST_CASE("stability: translates are recovered") {
    WaveExtraction w = nagumo_wave();
    Bistable b = make_cubic(0.3);
    const Grid& g = w.profile.grid;

    // pure translation: s(t) small throughout, xi recovered
    Field shifted = shift_interpolate(w.profile, 0.5);
    std::vector<double> pv(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i)
        pv[static_cast<size_t>(i)] = shifted.values[static_cast<size_t>(i)] -
                                     w.profile.values[static_cast<size_t>(i)];
    Field pert = make_field(g, std::move(pv), 0.0, 0.0, 1e9);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.snapshot_stride = 25;
    StabilityFit fit = stability_experiment(w, pert, b, w.params, 15.0, cfg);
    double tail_dist = 0.0;
    for (const auto& d : fit.distances)
        if (d.first > 5.0) tail_dist = std::max(tail_dist, d.second);
    CHECK(tail_dist <= 1e-3);
    CHECK(fit.shift_xi == doctest::Approx(0.5).epsilon(0.05));

    // zero perturbation reports immediate convergence
    Field zero = make_field(g, std::vector<double>(static_cast<size_t>(g.n_points), 0.0),
                            0.0, 0.0, 1e9);
    StabilityFit triv = stability_experiment(w, zero, b, w.params, 2.0, cfg);
    CHECK(triv.already_converged);
}

TEST_CASE("stability: bump perturbation relaxes exponentially") {
    WaveExtraction w = nagumo_wave();
    Bistable b = make_cubic(0.3);
    const Grid& g = w.profile.grid;
    Field pert = sample_field(
        g, [](double x) { return 0.05 * std::exp(-0.25 * (x - 3.0) * (x - 3.0)); }, 0.0, 0.0,
        1e9);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.snapshot_stride = 25;
    StabilityFit fit = stability_experiment(w, pert, b, w.params, 25.0, cfg);
    CHECK(fit.kappa > 0.0);
    CHECK(fit.r2 >= 0.9);
}
