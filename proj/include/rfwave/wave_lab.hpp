#pragma once

#include <utility>
#include <vector>

#include "rfwave/cauchy.hpp"
#include "rfwave/field.hpp"
#include "rfwave/nonlinearity.hpp"
#include "rfwave/riesz_feller.hpp"

namespace rfwave {

/// The fixed ramp initial datum: 0 for s <= 0, 1 for s >= 4, quintic
/// smoothstep in between (0 < zeta' < 1, |zeta''| <= 1), centered on the grid.
Field initial_zeta(const Grid& g);

/// Per-snapshot level crossing z(level, t) by monotone cubic inverse
/// interpolation. Each snapshot must cross the level exactly once, increasing.
std::vector<std::pair<double, double>> track_level(const Trajectory& traj, double level);

struct TailFit {
    double exponent = 0.0;   // pooled log-log slope (expected ~ -alpha), or the
                             // decay rate for the exponential branch
    double amplitude = 0.0;
    double r2 = 0.0;
    double exponent_left = 0.0;
    double exponent_right = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool exponential = false;    // alpha = 2 branch
    double power_r2 = 0.0;       // competing power-law fit (alpha = 2 only)
};

struct WaveExtraction {
    RFParams params;
    double level_a = 0.0;
    Field profile;  // U, tails 0 -> 1, U(0) = level_a
    double speed = 0.0;
    std::vector<std::pair<double, double>> z_track;  // full (t, z) series
    double speed_fit_r2 = 0.0;
    double speed_fit_rms = 0.0;
    bool stationary = false;  // zero-displacement branch of the rigidity gate
    double residual_sup = 0.0;   // sup of |-cU' - DU - f(U)| over |xi| <= 0.9 L
    double residual_edge = 0.0;  // same over the full grid; the outermost
                                 // columns carry the truncation artifacts
    double front_width = 0.0;  // z(0.95) - z(0.05) of the profile
    TailFit tail;
    double monotonicity_defect = 0.0;  // most negative profile increment
};

struct ExtractOptions {
    double settle_fraction = 0.2;  // leading fraction of the run discarded
};

/// Measure the traveling wave from a level-tracking run: speed from the
/// z(a,t) regression, profile from z-aligned snapshot averaging, residual of
/// -c U' = D U + f(U), and the far-field tail fit.
WaveExtraction extract_wave(const Trajectory& traj, const Bistable& b, const RFParams& p,
                            const ExtractOptions& opt = {});

/// c = -int f / int (U')^2; the derivation needs the symmetric operator, so
/// theta must be 0.
double speed_from_formula(const WaveExtraction& w, const Bistable& b);

/// A-priori bound |c| <= ||f|| / eps_bar * (3+a)/a from explicit tanh-shaped
/// sub/supersolutions, eps_bar solved by bisection.
double speed_bound(const Bistable& b, const RFParams& p);

/// Far-field fit of min(U, 1-U): power law for alpha < 2, exponential at 2.
TailFit fit_tail(const Field& profile, const RFParams& p, double front_width);

enum class CertificateKind {
    supersolution_profile,  // shifted, delta-lifted extracted profile
    subsolution_profile,
    supersolution_ramp,  // traveling zeta ramp, no extraction needed
    subsolution_ramp
};

struct Certificate {
    CertificateKind kind{};
    // profile family constants
    double delta = 0.0;
    double delta_star = 0.0;
    double sigma_star = 0.0;
    double beta = 0.0;
    double M = 0.0;
    // ramp family constants
    double epsilon = 0.0;
    double K_speed = 0.0;
    double xi_anchor = 0.0;
    // verification
    double worst_margin = 0.0;  // sign-corrected; pass needs >= -tolerance
    int probe_count = 0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Super/subsolution pair built from the extracted profile,
/// w(x,t) = U(x - ct +- sigma* delta (1-e^{-beta t})) +- delta e^{-beta t},
/// with the constants selected from the profile and the reaction.
std::pair<Certificate, Certificate> certify_profile(const WaveExtraction& w,
                                                    const Bistable& b, const RFParams& p,
                                                    double delta);
/// Largest admissible delta for the profile certificates.
double profile_delta_star(const Bistable& b);

/// Super/subsolution pair built from traveling zeta ramps with rate epsilon
/// and drift K; needs no extracted wave.
std::pair<Certificate, Certificate> certify_ramp(const Bistable& b, const RFParams& p,
                                                 double delta);

struct UniquenessReport {
    WaveExtraction first;
    WaveExtraction second;
    double speed_gap = 0.0;
    double aligned_distance = 0.0;
    double shift = 0.0;  // translation aligning the two profiles
};

/// Evolve two admissible seeds, extract both waves, align up to translation.
UniquenessReport uniqueness_check(const RFParams& p, const Bistable& b, const Field& seed1,
                                  const Field& seed2, const SolverConfig& cfg,
                                  const ExtractOptions& opt = {});

struct StabilityFit {
    double kappa = 0.0;
    double shift_xi = 0.0;  // recovered translate: u0 = U(.+xi) gives shift_xi ~ xi
    double prefactor = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<double, double>> distances;  // (t, s(t))
    bool already_converged = false;
};

/// Perturb the wave, evolve, and fit the exponential relaxation of
/// s(t) = min over shifts of sup|u(.,t) - U(. - shift)|.
StabilityFit stability_experiment(const WaveExtraction& w, const Field& perturbation,
                                  const Bistable& b, const RFParams& p, double T,
                                  SolverConfig cfg);

struct WaveRunOptions {
    double half_width = 0.0;  // 0: 80 by default, doubled for alpha <= 1.3
    int n_points = 8192;
    double dt = 5e-3;
    double T = 40.0;
    double settle_fraction = 0.2;
};

/// Standard production run: evolve the zeta ramp and extract the wave.
WaveExtraction run_wave(const Bistable& b, const RFParams& p, const WaveRunOptions& opt = {});

}  // namespace rfwave
