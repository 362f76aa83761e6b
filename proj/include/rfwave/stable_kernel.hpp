#pragma once

#include <string>
#include <vector>

#include "rfwave/field.hpp"
#include "rfwave/riesz_feller.hpp"

namespace rfwave {

/// Tabulated Green's function G(x,1) of u_t = D^alpha_theta u, built by
/// characteristic-function inversion; any t > 0 through the scaling law
/// G(x,t) = t^(-1/alpha) G(x t^(-1/alpha), 1).
struct KernelTable {
    RFParams params;
    double x_max = 0.0;
    double dx = 0.0;
    std::vector<double> x_nodes;
    std::vector<double> g1;   // G(x_nodes, 1), clamped at the -1e-12 noise floor
    std::vector<double> cdf;  // integral of G(.,1) up to x_nodes[i]
    double tail_amp_left = 0.0;   // fitted coefficient of |x|^(-1-alpha)
    double tail_amp_right = 0.0;
    double tail_amplitude = 0.0;  // mean of the two
    double tail_slope_left = 0.0;   // measured log-log slope, expected -(1+alpha)
    double tail_slope_right = 0.0;
    double mass_defect = 0.0;  // |trapezoid mass + analytic tails - 1|
    double min_value = 0.0;    // pre-clamp minimum of the inversion
    int build_n = 0;

    double eval(double x, double t) const;
    double cdf_at(double x, double t) const;
};

/// Inverts exp(psi) on n frequency nodes (rounded up to a power of two).
KernelTable build_kernel(const RFParams& p, double x_max = -1.0, int n = 1 << 20);

/// Semigroup step S_t applied to a settled-tail field: perturbation through
/// the transform, background ramp through the kernel CDF, tails mapped to
/// themselves (unit mass).
Field convolve(const KernelTable& k, const Field& field, double t);

/// Measured kernel properties: nonnegativity/positivity, unit mass, scaling
/// law, semigroup defect, derivative envelope, tail law.
struct KernelReport {
    double min_value = 0.0;
    double mass_defect = 0.0;
    double scaling_dev = 0.0;
    double semigroup_defect_short = 0.0;  // s = t = 0.5
    double semigroup_defect_long = 0.0;   // s = 1, t = 2
    double envelope_B0 = 0.0;
    double envelope_B1 = 0.0;
    bool strictly_positive = false;
    double tail_slope_left = 0.0;
    double tail_slope_right = 0.0;
};
KernelReport check_properties(const KernelTable& k);

void write_kernel_dump(const KernelTable& k, const std::string& csv_path,
                       const std::string& json_path);

}  // namespace rfwave
