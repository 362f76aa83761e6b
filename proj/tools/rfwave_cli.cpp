// Experiment driver: one subcommand per operation, reproducible records on
// disk, nonzero exit when any assertion fails.
//
//   rfwave <operation> --config <path> [--out <dir>] [--seed <n>] [--jobs <n>]

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "rfwave/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Riesz-Feller bistable traveling-wave laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int jobs = 0;

    const char* ops[] = {"kernel", "opcheck", "evolve", "wave", "sweep", "certify", "stability"};
    std::string chosen;
    for (const char* op : ops) {
        CLI::App* sub = app.add_subcommand(op);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed, "seed override for randomized suites");
        sub->add_option("--jobs", jobs, "sweep worker pool size");
        sub->callback([op, &chosen]() { chosen = op; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        // the subcommand pins the operation regardless of the file
        setenv("RFWAVE_OPERATION", chosen.c_str(), 1);
        return rfwave::run_from_file(config_path, out_dir, seed, jobs);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
