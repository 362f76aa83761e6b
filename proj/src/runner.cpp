#include "rfwave/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "rfwave/numerics.hpp"
#include "rfwave/stable_kernel.hpp"
#include "rfwave/wave_lab.hpp"

namespace rfwave {
namespace {

constexpr const char* kVersion = "0.2.0";
constexpr double kPi = 3.141592653589793238462643383279502884;

using nlohmann::json;

void check(RunRecord& r, const std::string& name, bool pass, double value,
           double threshold) {
    r.assertions.push_back({name, pass, value, threshold});
}

void echo_config(RunRecord& r, const ExperimentConfig& c) {
    auto put = [&](const std::string& k, const std::string& v) {
        r.config_echo.emplace_back(k, v);
    };
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    put("alpha", num(c.alpha));
    put("certify.delta", num(c.delta));
    put("certify.kind", c.certify_kind);
    put("grid.L", num(c.grid_half_width()));
    put("grid.n", num(c.n));
    put("nonlinearity.a", num(c.a));
    put("nonlinearity.kind", c.kind);
    put("operation", operation_name(c.operation));
    put("out", c.out_dir);
    put("seed", num(static_cast<double>(c.seed)));
    put("solver.T", num(c.T));
    put("solver.clamp", c.clamp_reaction ? "true" : "false");
    put("solver.dt", num(c.dt));
    put("solver.scheme", c.scheme);
    put("stability.bump", num(c.bump_amplitude));
    put("theta", num(c.theta));
}

std::string artifact_path(const ExperimentConfig& c, const char* name) {
    return c.out_dir + "/" + name;
}

void run_kernel(const ExperimentConfig& c, RunRecord& r) {
    KernelTable k = build_kernel(c.params());
    KernelReport rep = check_properties(k);
    write_kernel_dump(k, artifact_path(c, "kernel.csv"), artifact_path(c, "kernel.json"));
    r.metrics.emplace_back("envelope_B0", rep.envelope_B0);
    r.metrics.emplace_back("envelope_B1", rep.envelope_B1);
    r.metrics.emplace_back("mass_defect", rep.mass_defect);
    r.metrics.emplace_back("min_value", rep.min_value);
    r.metrics.emplace_back("semigroup_defect", std::max(rep.semigroup_defect_short,
                                                        rep.semigroup_defect_long));
    r.metrics.emplace_back("tail_amplitude", k.tail_amplitude);
    check(r, "mass_defect<=1e-6", rep.mass_defect <= 1e-6, rep.mass_defect, 1e-6);
    check(r, "min_value>=-1e-12", rep.min_value >= -1e-12, rep.min_value, -1e-12);
    check(r, "semigroup_defect<=1e-5",
          std::max(rep.semigroup_defect_short, rep.semigroup_defect_long) <= 1e-5,
          std::max(rep.semigroup_defect_short, rep.semigroup_defect_long), 1e-5);
    check(r, "strictly_positive", rep.strictly_positive, rep.strictly_positive ? 1.0 : 0.0, 1.0);
    if (c.alpha < 2.0) {
        const bool extremal =
            std::abs(std::abs(c.theta) - std::min(c.alpha, 2.0 - c.alpha)) < 1e-12;
        if (!extremal) {
            const double worst = std::max(std::abs(rep.tail_slope_left + 1.0 + c.alpha),
                                          std::abs(rep.tail_slope_right + 1.0 + c.alpha));
            r.metrics.emplace_back("tail_slope_dev", worst);
            check(r, "tail_slope_within_0.1", worst <= 0.1, worst, 0.1);
        }
    }
}

void run_opcheck(const ExperimentConfig& c, RunRecord& r) {
    // eigen-identity on the transform lattice
    Grid eg = make_grid(16.0 * kPi, 2049);
    RFParams p = c.params();
    double eigen_dev = 0.0;
    for (double k : {0.5, 1.0, 2.0}) {
        Field w = sample_field(eg, [k](double x) { return std::sin(k * x); }, 0.0, 0.0, 1.0);
        Field out = apply_spectral(w, p, 1e-6);
        const double amp = std::pow(k, c.alpha);
        for (int i = 0; i < eg.n_points; ++i) {
            const double expect = -amp * std::sin(k * eg.x(i) - c.theta * kPi / 2.0);
            eigen_dev = std::max(eigen_dev,
                                 std::abs(out.values[static_cast<size_t>(i)] - expect) / amp);
        }
    }
    r.metrics.emplace_back("eigen_dev", eigen_dev);
    check(r, "eigen_identity<=1e-8", eigen_dev <= 1e-8, eigen_dev, 1e-8);

    if (c.alpha > 1.0 && c.alpha < 2.0) {
        Grid g = make_grid(40.0, 4096);
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> unif(0.5, 2.0);
        double two_path = 0.0, bound_gap = 1e300, const_annihilation = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const double wdt = unif(rng), amp = unif(rng) - 0.25;
            Field f = sample_field(
                g, [&](double x) { return amp * std::exp(-x * x / (wdt * wdt)); }, 0.0, 0.0);
            Field spec = apply_spectral(f, p, 1e-6);
            Field integ = apply_integral(f, p);
            for (int i = 0; i < g.n_points; ++i) {
                if (std::abs(g.x(i)) > 15.0) continue;
                two_path = std::max(two_path, std::abs(spec.values[static_cast<size_t>(i)] -
                                                       integ.values[static_cast<size_t>(i)]));
            }
            const double sup = integ.sup_abs();
            for (double M : {0.5, 1.0, 4.0})
                bound_gap = std::min(bound_gap, estimate_bound(f, p, M) - sup);
        }
        Field cst = constant_field(g, 0.7);
        const_annihilation = apply_integral(cst, p).sup_abs();
        r.metrics.emplace_back("bound_gap", bound_gap);
        r.metrics.emplace_back("const_annihilation", const_annihilation);
        r.metrics.emplace_back("two_path_dev", two_path);
        check(r, "two_path<=1e-4", two_path <= 1e-4, two_path, 1e-4);
        check(r, "bound_dominates", bound_gap >= 0.0, bound_gap, 0.0);
        check(r, "constants_annihilated<=1e-10", const_annihilation <= 1e-10,
              const_annihilation, 1e-10);
    }
}

void export_trajectory(const ExperimentConfig& c, const Trajectory& traj) {
    json manifest;
    manifest["alpha"] = c.alpha;
    manifest["theta"] = c.theta;
    manifest["a"] = c.a;
    manifest["dt"] = c.dt;
    manifest["T"] = c.T;
    manifest["times"] = traj.times;
    std::vector<double> sup, inf, tl, tr;
    for (const auto& L : traj.log) {
        sup.push_back(L.sup);
        inf.push_back(L.inf);
        tl.push_back(L.tail_left);
        tr.push_back(L.tail_right);
    }
    manifest["log_sup"] = sup;
    manifest["log_inf"] = inf;
    manifest["log_tail_left"] = tl;
    manifest["log_tail_right"] = tr;
    std::vector<std::string> files;
    for (size_t s = 0; s < traj.snapshots.size(); ++s) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%04zu.csv", s);
        write_field_csv(traj.snapshots[s], c.out_dir + "/" + name);
        files.emplace_back(name);
    }
    manifest["snapshots"] = files;
    std::ofstream out(c.out_dir + "/trajectory.json");
    out << manifest.dump(2) << "\n";
}

void run_evolve(const ExperimentConfig& c, RunRecord& r) {
    Grid g = make_grid(c.grid_half_width(), c.n);
    Trajectory traj = evolve(initial_zeta(g), c.reaction(), c.params(), c.solver());
    export_trajectory(c, traj);
    double sup = -1e300, inf = 1e300;
    for (const auto& L : traj.log) {
        sup = std::max(sup, L.sup);
        inf = std::min(inf, L.inf);
    }
    r.metrics.emplace_back("inf", inf);
    r.metrics.emplace_back("sup", sup);
    check(r, "confined", sup <= 1.0 + 1e-8 && inf >= -1e-8, sup, 1.0 + 1e-8);
}

void export_wave(const ExperimentConfig& c, const WaveExtraction& w) {
    write_field_csv(w.profile, c.out_dir + "/profile.csv");
    json j;
    j["a"] = c.a;
    j["alpha"] = c.alpha;
    j["c"] = w.speed;
    j["front_width"] = w.front_width;
    j["residual_edge"] = w.residual_edge;
    j["residual_sup"] = w.residual_sup;
    j["speed_fit_r2"] = w.speed_fit_r2;
    j["tail_amplitude"] = w.tail.amplitude;
    j["tail_exponent"] = w.tail.exponent;
    j["tail_r2"] = w.tail.r2;
    j["theta"] = c.theta;
    std::ofstream out(c.out_dir + "/wave.json");
    out << j.dump(2) << "\n";
}

WaveRunOptions wave_options(const ExperimentConfig& c) {
    WaveRunOptions o;
    o.half_width = c.grid_half_width();
    o.n_points = c.n;
    o.dt = c.dt;
    o.T = c.T;
    return o;
}

void run_wave_op(const ExperimentConfig& c, RunRecord& r) {
    Bistable b = c.reaction();
    RFParams p = c.params();
    WaveExtraction w = run_wave(b, p, wave_options(c));
    export_wave(c, w);
    r.metrics.emplace_back("c", w.speed);
    r.metrics.emplace_back("residual_sup", w.residual_sup);
    r.metrics.emplace_back("speed_fit_r2", w.speed_fit_r2);
    r.metrics.emplace_back("tail_exponent", w.tail.exponent);
    r.metrics.emplace_back("tail_r2", w.tail.r2);
    check(r, "profile_monotone", w.monotonicity_defect >= -1e-8, w.monotonicity_defect, -1e-8);
    check(r, "profile_at_a", std::abs(w.profile.value_at(0.0) - b.a) <= 1e-6,
          std::abs(w.profile.value_at(0.0) - b.a), 1e-6);
    const int sign = predicted_speed_sign(b);
    if (std::abs(w.speed) > 2e-3)
        check(r, "speed_sign", (w.speed > 0 ? 1 : -1) == sign, w.speed, 0.0);
    // formula agreement and the tail law are resolution-sensitive: asserted
    // at production-grade runs, recorded as metrics otherwise
    const bool production = c.T >= 30.0 && c.grid_half_width() >= 60.0;
    if (p.theta == 0.0 && std::abs(w.speed) > 0.02) {
        const double cf = speed_from_formula(w, b);
        const double rel = std::abs(cf - w.speed) / std::abs(w.speed);
        r.metrics.emplace_back("c_formula", cf);
        if (production) check(r, "speed_formula_5pct", rel <= 0.05, rel, 0.05);
    }
    if (p.alpha < 2.0) {
        const double cb = speed_bound(b, p);
        r.metrics.emplace_back("c_bound", cb);
        check(r, "speed_within_bound", std::abs(w.speed) <= cb, std::abs(w.speed), cb);
        if (production)
            check(r, "tail_exponent_near_-alpha", std::abs(w.tail.exponent + p.alpha) <= 0.25,
                  w.tail.exponent, -p.alpha);
    } else if (production) {
        check(r, "tail_exponential_r2", w.tail.r2 >= 0.99, w.tail.r2, 0.99);
    }
}

void run_certify(const ExperimentConfig& c, RunRecord& r) {
    Bistable b = c.reaction();
    RFParams p = c.params();
    Certificate sup, sub;
    if (c.certify_kind == "ramp") {
        const double delta = c.delta > 0.0 ? c.delta : 0.1;
        std::tie(sup, sub) = certify_ramp(b, p, delta);
    } else {
        WaveExtraction w = run_wave(b, p, wave_options(c));
        const double delta = c.delta > 0.0 ? c.delta : 0.5 * profile_delta_star(b);
        std::tie(sup, sub) = certify_profile(w, b, p, delta);
    }
    json j;
    auto dump_cert = [](const Certificate& cc) {
        json cj;
        cj["M"] = cc.M;
        cj["K_speed"] = cc.K_speed;
        cj["beta"] = cc.beta;
        cj["delta"] = cc.delta;
        cj["delta_star"] = cc.delta_star;
        cj["epsilon"] = cc.epsilon;
        cj["pass"] = cc.pass;
        cj["probe_count"] = cc.probe_count;
        cj["sigma_star"] = cc.sigma_star;
        cj["tolerance"] = cc.tolerance;
        cj["worst_margin"] = cc.worst_margin;
        return cj;
    };
    j["subsolution"] = dump_cert(sub);
    j["supersolution"] = dump_cert(sup);
    std::ofstream out(c.out_dir + "/certificates.json");
    out << j.dump(2) << "\n";
    r.metrics.emplace_back("sub_margin", sub.worst_margin);
    r.metrics.emplace_back("sup_margin", sup.worst_margin);
    check(r, "subsolution_pass", sub.pass, sub.worst_margin, -sub.tolerance);
    check(r, "supersolution_pass", sup.pass, sup.worst_margin, -sup.tolerance);
}

void run_stability(const ExperimentConfig& c, RunRecord& r) {
    Bistable b = c.reaction();
    RFParams p = c.params();
    WaveExtraction w = run_wave(b, p, wave_options(c));
    const Grid& g = w.profile.grid;
    const double amp = c.bump_amplitude;
    Field pert = sample_field(
        g, [&](double x) { return amp * std::exp(-0.25 * (x - 3.0) * (x - 3.0)); }, 0.0, 0.0,
        1e9);
    SolverConfig scfg = c.solver();
    StabilityFit fit = stability_experiment(w, pert, b, p, c.T, scfg);
    json j;
    j["kappa"] = fit.kappa;
    j["prefactor"] = fit.prefactor;
    j["r2"] = fit.r2;
    j["shift_xi"] = fit.shift_xi;
    std::vector<double> ts, ds;
    for (const auto& d : fit.distances) {
        ts.push_back(d.first);
        ds.push_back(d.second);
    }
    j["t"] = ts;
    j["s"] = ds;
    std::ofstream out(c.out_dir + "/stability.json");
    out << j.dump(2) << "\n";
    r.metrics.emplace_back("kappa", fit.kappa);
    r.metrics.emplace_back("stability_r2", fit.r2);
    check(r, "kappa_positive", fit.kappa > 0.0, fit.kappa, 0.0);
    check(r, "stability_fit_r2", fit.r2 >= 0.9, fit.r2, 0.9);
}

}  // namespace

std::string to_json(const RunRecord& r) {
    json j;
    j["artifact_version"] = r.artifact_version;
    j["operation"] = r.operation;
    j["wall_seconds"] = r.wall_seconds;
    json cfg = json::object();
    for (const auto& [k, v] : r.config_echo) cfg[k] = v;
    j["config"] = cfg;
    json met = json::object();
    for (const auto& [k, v] : r.metrics) met[k] = v;
    j["metrics"] = met;
    json as = json::array();
    for (const Assertion& a : r.assertions) {
        json aj;
        aj["name"] = a.name;
        aj["pass"] = a.pass;
        aj["threshold"] = a.threshold;
        aj["value"] = a.value;
        as.push_back(aj);
    }
    j["assertions"] = as;
    j["all_pass"] = r.all_pass;
    return j.dump(2) + "\n";
}

RunRecord record_from_json(const std::string& text) {
    json j = json::parse(text);
    RunRecord r;
    r.artifact_version = j.at("artifact_version").get<std::string>();
    r.operation = j.at("operation").get<std::string>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& [k, v] : j.at("config").items())
        r.config_echo.emplace_back(k, v.get<std::string>());
    for (const auto& [k, v] : j.at("metrics").items())
        r.metrics.emplace_back(k, v.get<double>());
    for (const auto& aj : j.at("assertions")) {
        Assertion a;
        a.name = aj.at("name").get<std::string>();
        a.pass = aj.at("pass").get<bool>();
        a.threshold = aj.at("threshold").get<double>();
        a.value = aj.at("value").get<double>();
        r.assertions.push_back(a);
    }
    r.all_pass = j.at("all_pass").get<bool>();
    return r;
}

RunRecord run(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    RunRecord r;
    r.artifact_version = kVersion;
    r.operation = operation_name(cfg.operation);
    echo_config(r, cfg);
    const auto t0 = std::chrono::steady_clock::now();
    switch (cfg.operation) {
        case Operation::kernel: run_kernel(cfg, r); break;
        case Operation::opcheck: run_opcheck(cfg, r); break;
        case Operation::evolve: run_evolve(cfg, r); break;
        case Operation::wave: run_wave_op(cfg, r); break;
        case Operation::certify: run_certify(cfg, r); break;
        case Operation::stability: run_stability(cfg, r); break;
        case Operation::sweep:
            throw std::invalid_argument("run: sweep must be expanded by the driver");
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    r.all_pass = true;
    for (const Assertion& a : r.assertions) r.all_pass = r.all_pass && a.pass;
    std::sort(r.metrics.begin(), r.metrics.end());
    std::ofstream out(cfg.out_dir + "/record.json");
    out << to_json(r);
    return r;
}

int run_from_file(const std::string& config_path, const std::string& out_override,
                  long long seed_override, int jobs_override) {
    std::ifstream in(config_path);
    if (!in) {
        std::fprintf(stderr, "cannot open config '%s'\n", config_path.c_str());
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    RawConfig raw = parse_raw_config(ss.str());
    if (!out_override.empty()) {
        ConfigValue v;
        v.text = out_override;
        raw["out"] = v;
    }
    if (seed_override >= 0) {
        ConfigValue v;
        v.text = std::to_string(seed_override);
        raw["seed"] = v;
    }
    if (jobs_override >= 1) {
        ConfigValue v;
        v.text = std::to_string(jobs_override);
        raw["jobs"] = v;
    }

    auto children = expand_sweep(raw);
    const bool is_sweep = children.size() > 1;
    // a declared sweep operation runs each child as a wave measurement
    for (auto& [suffix, child] : children) {
        auto it = child.find("operation");
        if (it != child.end() && it->second.text == "sweep") {
            ConfigValue v;
            v.text = "wave";
            child["operation"] = v;
        }
    }

    int jobs = 1;
    std::string base_out = "out";
    {
        auto it = raw.find("jobs");
        if (it != raw.end() && !it->second.is_list) jobs = std::stoi(it->second.text);
        auto ot = raw.find("out");
        if (ot != raw.end() && !ot->second.is_list) base_out = ot->second.text;
    }

    std::mutex io_mutex;
    std::vector<int> results(children.size(), 0);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= children.size()) return;
            auto& [suffix, rawchild] = children[idx];
            try {
                if (is_sweep) {
                    ConfigValue v;
                    v.text = base_out + suffix;
                    rawchild["out"] = v;
                }
                ExperimentConfig cfg = build_config(rawchild);
                RunRecord rec = run(cfg);
                {
                    std::lock_guard<std::mutex> lock(io_mutex);
                    std::printf("[%s] %s -> %s\n", rec.all_pass ? "ok" : "FAIL",
                                cfg.out_dir.c_str(), rec.operation.c_str());
                    for (const Assertion& a : rec.assertions)
                        if (!a.pass)
                            std::printf("    failed: %s (value %.6g vs %.6g)\n", a.name.c_str(),
                                        a.value, a.threshold);
                }
                results[idx] = rec.all_pass ? 0 : 1;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io_mutex);
                std::fprintf(stderr, "[error] child '%s': %s\n", suffix.c_str(), e.what());
                results[idx] = 2;
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(children.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    int status = 0;
    for (int rc : results) status = std::max(status, rc);
    return status;
}

}  // namespace rfwave
