#pragma once

#include <string>
#include <vector>

namespace rfwave {

/// Uniform 1-D grid on [-L, L] with n_points samples, x_i = -L + i*dx.
struct Grid {
    double half_width = 0.0;  // L
    int n_points = 0;
    double dx = 0.0;

    double x(int i) const { return -half_width + i * dx; }
    bool operator==(const Grid&) const = default;
};

Grid make_grid(double half_width, int n_points);

/// Sampled field on a Grid with declared constant extensions for |x| > L.
/// A field "claims settled tails" when its boundary samples are within
/// tail_tol (relative to the tail gap, absolute for equal tails) of the
/// declared values.
struct Field {
    Grid grid;
    std::vector<double> values;
    double tail_left = 0.0;
    double tail_right = 0.0;
    double tail_tol = 1e-6;

    /// Cubic interpolation inside [-L, L], declared tails outside.
    double value_at(double x) const;
    double boundary_mismatch() const;
    bool tails_settled() const;
    double sup_abs() const;
};

Field make_field(const Grid& g, std::vector<double> values, double tail_left,
                 double tail_right, double tail_tol = 1e-6);

/// Constant field, exact tails.
Field constant_field(const Grid& g, double c);

/// Sample an arbitrary function; tails taken from the declared limits.
template <class F>
Field sample_field(const Grid& g, F&& f, double tail_left, double tail_right,
                   double tail_tol = 1e-6) {
    std::vector<double> v(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i) v[static_cast<size_t>(i)] = f(g.x(i));
    return make_field(g, std::move(v), tail_left, tail_right, tail_tol);
}

/// Reference background ramp: quintic smoothstep from 0 to 1 stretched over
/// the middle half [-L/2, L/2] of the domain.
double reference_ramp(const Grid& g, double x);
Field reference_ramp_field(const Grid& g);

struct Decomposition {
    Field background;    // tail_left -> tail_right along the reference ramp
    Field perturbation;  // remainder, zero tails
};

/// Split a settled-tail field into the smooth background ramp carrying the
/// tails plus a zero-tail perturbation. Errors on unsettled tails.
Decomposition decompose(const Field& field);

/// Resample at x_i + s (cubic); points outside [-L, L] take the tail values.
/// Requires |s| < L/2.
Field shift_interpolate(const Field& field, double s);

/// CSV "x,u" with 17 significant digits, one row per grid point.
void write_field_csv(const Field& field, const std::string& path);
Field read_field_csv(const std::string& path, double tail_left, double tail_right);

}  // namespace rfwave
