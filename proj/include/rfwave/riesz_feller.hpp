#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "rfwave/field.hpp"

namespace rfwave {

/// Order/skewness pair (alpha, theta) of the operator D^alpha_theta.
/// Admissible region: 0 < alpha <= 2, |theta| <= min(alpha, 2-alpha).
struct RFParams {
    double alpha = 2.0;
    double theta = 0.0;
};

RFParams make_rf_params(double alpha, double theta);
bool rf_admissible(double alpha, double theta);

/// Multiplier psi(xi) = -|xi|^alpha * exp(i*sgn(xi)*theta*pi/2).
std::complex<double> symbol(const RFParams& p, double xi);

/// Coefficients of the jump-measure representation,
/// c1 = Gamma(1+alpha) sin((alpha+theta) pi/2)/pi and the mirrored c2.
/// Valid for alpha != 1 (principal value) and alpha < 2 (no jump part).
struct IntegralCoeffs {
    double c1 = 0.0;
    double c2 = 0.0;
};
IntegralCoeffs coeffs(const RFParams& p);

/// Constant of the C^2_b bound: Gamma(1+alpha)/pi *
/// |sin((alpha+theta)pi/2) + sin((alpha-theta)pi/2)|.
double estimate_constant(const RFParams& p);

/// Operator applied through the transform on a zero-tail field.
/// boundary_ratio_tol guards against periodization of heavy-tailed data:
/// boundary magnitude must stay below it relative to sup|field|.
Field apply_spectral(const Field& field, const RFParams& p,
                     double boundary_ratio_tol = 1e-8);

/// Regularized singular-integral form (1 < alpha < 2) on a bounded C^2 field
/// with constant tail extension; split at cutoff m_loc.
Field apply_integral(const Field& field, const RFParams& p, double m_loc = 1.0);
double apply_integral_at(const Field& field, const RFParams& p, double x,
                         double m_loc = 1.0);

/// Standalone evaluator of the 0 < alpha < 1 representation (no f'
/// subtraction), kept for kernel cross-checks; not used by the stepper.
double apply_integral_low_at(const Field& field, const RFParams& p, double x);

/// Sup bound K ||f''|| M^(2-a)/(2-a) + 4 K ||f'|| M^(1-a)/(a-1) with discrete
/// finite-difference sup norms.
double estimate_bound(const Field& field, const RFParams& p, double M);
/// Minimizer of the bound over M: 4||f'||/||f''||.
double estimate_bound_optimal_M(const Field& field, const RFParams& p);

/// Full operator on a settled-tail field: perturbation spectrally, the
/// background ramp through the singular integral (cached per grid/params;
/// alpha = 2 uses the exact ramp second derivative).
Field apply(const Field& field, const RFParams& p);

/// Operator action on the reference ramp of g (0 -> 1 shape), shared and
/// cached; apply() scales it by (tail_right - tail_left).
std::shared_ptr<const std::vector<double>> background_operator_action(const Grid& g,
                                                                      const RFParams& p);

}  // namespace rfwave
