#pragma once

#include <map>
#include <string>
#include <vector>

#include "rfwave/cauchy.hpp"
#include "rfwave/nonlinearity.hpp"
#include "rfwave/riesz_feller.hpp"

namespace rfwave {

enum class Operation { kernel, opcheck, evolve, wave, sweep, certify, stability };

Operation parse_operation(const std::string& name);
std::string operation_name(Operation op);

/// One experiment: operator parameters, reaction, grid, solver settings and
/// output location. Parsed from a flat key-value file; unknown keys are
/// errors, list values turn the run into a sweep.
struct ExperimentConfig {
    Operation operation = Operation::wave;
    double alpha = 1.5;
    double theta = 0.0;
    // nonlinearity
    std::string kind = "cubic";
    double a = 0.3;
    std::vector<double> coeffs;  // polynomial kind
    double u_minus = 0.0;
    double u_plus = 1.0;
    // grid
    double L = 0.0;  // 0: wave default (80, doubled for alpha <= 1.3)
    int n = 8192;
    // solver
    double dt = 5e-3;
    double T = 40.0;
    int snapshot_stride = 0;  // 0: every 0.1 time units
    std::string scheme = "etd2rk";
    bool clamp_reaction = true;
    // certificates / stability
    double delta = 0.0;  // 0: delta_star/2 for profile certificates
    std::string certify_kind = "profile";  // or "ramp"
    double bump_amplitude = 0.05;
    // bookkeeping
    std::string out_dir = "out";
    unsigned long long seed = 1;
    int jobs = 1;

    Bistable reaction() const;
    RFParams params() const;
    SolverConfig solver() const;
    double grid_half_width() const;
};

/// Values a key may take in the config file.
struct ConfigValue {
    std::string text;
    std::vector<std::string> list;  // non-empty for [a, b, c] values
    bool is_list = false;
};

using RawConfig = std::map<std::string, ConfigValue>;

/// Parse the plain-text key-value syntax:
///   key = value
///   nonlinearity = { kind = "cubic", a = 0.3 }
///   alpha = [1.5, 2.0]           (expands into sweep children)
/// '#' starts a comment. Environment variables RFWAVE_<KEY> (dots -> '_',
/// uppercase) override file values.
RawConfig parse_raw_config(const std::string& text);

/// Validate + fill defaults. Throws on unknown keys or inadmissible values,
/// quoting the violated constraint.
ExperimentConfig build_config(const RawConfig& raw);
ExperimentConfig parse_config(const std::string& text);

/// Cartesian expansion of list-valued keys into child configs, paired with
/// the subdirectory suffix for each child.
std::vector<std::pair<std::string, RawConfig>> expand_sweep(const RawConfig& raw);

}  // namespace rfwave
