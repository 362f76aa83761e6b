#pragma once

#include <utility>
#include <vector>

#include "rfwave/field.hpp"
#include "rfwave/nonlinearity.hpp"
#include "rfwave/riesz_feller.hpp"
#include "rfwave/stable_kernel.hpp"

namespace rfwave {

enum class Scheme { etd1, etd2rk };

struct SolverConfig {
    double dt = 5e-3;
    double T = 40.0;
    int snapshot_stride = 20;  // default ~0.1 time units at dt = 5e-3
    Scheme scheme = Scheme::etd2rk;
    bool clamp_reaction = true;
    bool linear_only = false;  // drop the reaction (pure diffusion)
};

struct StepLog {
    double t = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double tail_left = 0.0;
    double tail_right = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<StepLog> log;  // one entry per step
};

/// Exponential-integrator evolution of u_t = D^alpha_theta u + f(u). The
/// zero-tail part of the state advances on the transform grid with
/// w <- e^{dt psi} w + dt phi1(dt psi) g; the background ramp's operator
/// action and the far-field tail motion are folded into the forcing g.
Trajectory evolve(const Field& u0, const Bistable& b, const RFParams& p,
                  const SolverConfig& cfg);

struct PicardResult {
    Field u;                           // final iterate at time T
    std::vector<double> iterate_gaps;  // sup|u^{k+1}(T) - u^k(T)| per sweep
};

/// Mild-formulation fixed-point sweeps with a 64-node product-trapezoid time
/// integral. Requires tails at reaction roots (zero-tail forcing).
PicardResult picard_iterate(const Field& u0, const Bistable& b, const RFParams& p,
                            double T, int n_iter);

/// e^{-K2 t} min_{z in [-m-1, m]} G(z, t).
double eta_lower_bound(double m, double t, double K2, const KernelTable& k);

struct OrderingProbe {
    double x = 0.0;
    double t = 0.0;
    double gap = 0.0;        // v(x,t) - u(x,t)
    double eta_bound = 0.0;  // eta_lb(|x|, t) * integral_0^1 (v0 - u0)
    bool pass = false;
};

struct ComparisonReport {
    std::vector<double> snapshot_times;
    std::vector<double> min_gap;  // min over x of v - u per snapshot
    double initial_mass = 0.0;    // integral over [0,1] of v0 - u0
    double K2 = 0.0;
    std::vector<OrderingProbe> probes;
};

/// Evolve an ordered pair and report order preservation plus the
/// kernel-positivity lower bound at the probe points.
ComparisonReport compare_evolutions(const Field& u0, const Field& v0, const Bistable& b,
                                    const RFParams& p, const SolverConfig& cfg,
                                    const KernelTable& k,
                                    const std::vector<double>& probe_xs,
                                    const std::vector<double>& probe_ts);

/// RK4 trace of the far-field limit equation du/dt = f(u).
std::vector<std::pair<double, double>> far_field_ode(double u_limit, const Bistable& b,
                                                     double T);

}  // namespace rfwave
