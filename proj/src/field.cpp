#include "rfwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rfwave/numerics.hpp"

namespace rfwave {

Grid make_grid(double half_width, int n_points) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("make_grid: half_width must be > 0");
    if (n_points < 16)
        throw std::invalid_argument("make_grid: need n_points >= 16");
    Grid g;
    g.half_width = half_width;
    g.n_points = n_points;
    g.dx = 2.0 * half_width / (n_points - 1);
    return g;
}

Field make_field(const Grid& g, std::vector<double> values, double tail_left,
                 double tail_right, double tail_tol) {
    if (static_cast<int>(values.size()) != g.n_points)
        throw std::invalid_argument("make_field: values size does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("make_field: non-finite value");
    Field f;
    f.grid = g;
    f.values = std::move(values);
    f.tail_left = tail_left;
    f.tail_right = tail_right;
    f.tail_tol = tail_tol;
    return f;
}

Field constant_field(const Grid& g, double c) {
    return make_field(g, std::vector<double>(static_cast<size_t>(g.n_points), c), c, c);
}

double Field::value_at(double x) const {
    if (x < -grid.half_width) return tail_left;
    if (x > grid.half_width) return tail_right;
    return cubic_interp_uniform(values, -grid.half_width, grid.dx, x);
}

double Field::boundary_mismatch() const {
    return std::max(std::abs(values.front() - tail_left),
                    std::abs(values.back() - tail_right));
}

bool Field::tails_settled() const {
    const double gap = std::abs(tail_right - tail_left);
    const double tol = (gap > 0.0) ? tail_tol * gap : tail_tol;
    return boundary_mismatch() <= tol;
}

double Field::sup_abs() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

double reference_ramp(const Grid& g, double x) {
    const double a = -0.5 * g.half_width;
    return smoothstep5((x - a) / g.half_width);
}

Field reference_ramp_field(const Grid& g) {
    return sample_field(g, [&](double x) { return reference_ramp(g, x); }, 0.0, 1.0, 0.0);
}

Decomposition decompose(const Field& field) {
    if (!field.tails_settled())
        throw std::invalid_argument("decompose: field tails not settled (boundary deviation exceeds tail_tolerance)");
    const Grid& g = field.grid;
    const double tl = field.tail_left, tr = field.tail_right;
    std::vector<double> bg(static_cast<size_t>(g.n_points));
    std::vector<double> pert(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i) {
        const double b = tl + (tr - tl) * reference_ramp(g, g.x(i));
        bg[static_cast<size_t>(i)] = b;
        pert[static_cast<size_t>(i)] = field.values[static_cast<size_t>(i)] - b;
    }
    Decomposition d;
    d.background = make_field(g, std::move(bg), tl, tr, 0.0);
    d.perturbation = make_field(g, std::move(pert), 0.0, 0.0, field.tail_tol);
    return d;
}

Field shift_interpolate(const Field& field, double s) {
    const Grid& g = field.grid;
    if (!(std::abs(s) < 0.5 * g.half_width))
        throw std::invalid_argument("shift_interpolate: |s| must be < L/2");
    std::vector<double> out(static_cast<size_t>(g.n_points));
    for (int i = 0; i < g.n_points; ++i)
        out[static_cast<size_t>(i)] = field.value_at(g.x(i) + s);
    return make_field(g, std::move(out), field.tail_left, field.tail_right, field.tail_tol);
}

void write_field_csv(const Field& field, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("write_field_csv: cannot open " + path);
    std::fprintf(fp, "x,u\n");
    for (int i = 0; i < field.grid.n_points; ++i)
        std::fprintf(fp, "%.17g,%.17g\n", field.grid.x(i), field.values[static_cast<size_t>(i)]);
    std::fclose(fp);
}

Field read_field_csv(const std::string& path, double tail_left, double tail_right) {
    std::FILE* fp = std::fopen(path.c_str(), "r");
    if (!fp) throw std::runtime_error("read_field_csv: cannot open " + path);
    char header[64];
    if (!std::fgets(header, sizeof(header), fp)) {
        std::fclose(fp);
        throw std::runtime_error("read_field_csv: empty file " + path);
    }
    std::vector<double> xs, us;
    double x, u;
    while (std::fscanf(fp, "%lg,%lg", &x, &u) == 2) {
        xs.push_back(x);
        us.push_back(u);
    }
    std::fclose(fp);
    if (xs.size() < 16) throw std::runtime_error("read_field_csv: too few rows in " + path);
    Grid g = make_grid(-xs.front(), static_cast<int>(xs.size()));
    return make_field(g, std::move(us), tail_left, tail_right);
}

}  // namespace rfwave
