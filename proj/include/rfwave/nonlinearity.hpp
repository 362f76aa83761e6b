#pragma once

#include <string>
#include <vector>

namespace rfwave {

enum class ReactionKind { cubic, quintic, polynomial };

/// Bistable reaction polynomial with roots u_minus < a < u_plus, the outer
/// two linearly stable. cubic(a) is u(1-u)(u-a); quintic(a) is
/// (u+1)u(u-a)(u-1)(u-2).
struct Bistable {
    ReactionKind kind = ReactionKind::cubic;
    std::vector<double> coeffs;  // ascending powers
    double u_minus = 0.0;
    double a = 0.0;
    double u_plus = 1.0;

    double f(double u) const;
    double df(double u) const;
};

Bistable make_cubic(double a);
Bistable make_quintic(double a);
Bistable make_polynomial(std::vector<double> coeffs, double u_minus, double a,
                         double u_plus);

inline double eval_f(const Bistable& b, double u) { return b.f(u); }
inline double eval_df(const Bistable& b, double u) { return b.df(u); }

/// (1/2) min{-f'(0), -f'(1)}; requires roots normalized to u_minus=0, u_plus=1.
double beta(const Bistable& b);

/// Exact integral of f over [u_minus, u_plus] via the polynomial antiderivative.
double potential_integral(const Bistable& b);

/// -sign(potential_integral): the direction a front must move.
int predicted_speed_sign(const Bistable& b);

/// Extrema of f on [u_minus, u_plus].
struct ReactionRange {
    double f_min = 0.0;
    double f_max = 0.0;
};
ReactionRange reaction_range(const Bistable& b);

/// Equivalent reaction with roots rescaled to {0, a', 1}: g(v) =
/// f(u_minus + (u_plus-u_minus) v) / (u_plus - u_minus).
Bistable rescale_to_unit(const Bistable& b);

/// C^2 modification of f that matches f exactly on [u_minus, u_plus] and
/// saturates to the constants f_min / f_max outside, so the reaction is
/// globally bounded. The blend runs over the last blend_width (or less, when
/// f escapes [f_min, f_max] sooner) before the escape point, which keeps
/// every value inside [f_min, f_max].
struct ClampedBistable {
    Bistable base;
    double blend_width = 0.5;
    // saturation layout, computed once
    double right_cut = 0.0;   // f == f(right side escapes) here
    double right_start = 0.0; // blend starts (>= u_plus)
    double right_level = 0.0;
    double left_cut = 0.0;
    double left_start = 0.0;  // blend starts (<= u_minus)
    double left_level = 0.0;

    double f(double u) const;
};

ClampedBistable clamp(const Bistable& b, double blend_width = 0.5);

}  // namespace rfwave
