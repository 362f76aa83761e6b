#pragma once

#include <string>
#include <vector>

#include "rfwave/config.hpp"

namespace rfwave {

struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;

    bool operator==(const Assertion&) const = default;
};

/// Outcome of one run: config echo, headline metrics, per-assertion verdicts.
/// Serialized as sorted-key JSON; re-parses to an equal value.
struct RunRecord {
    std::string artifact_version;
    std::string operation;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> config_echo;  // sorted keys
    std::vector<std::pair<std::string, double>> metrics;           // sorted keys
    std::vector<Assertion> assertions;
    bool all_pass = false;

    bool operator==(const RunRecord&) const = default;
};

std::string to_json(const RunRecord& r);
RunRecord record_from_json(const std::string& text);

/// Execute one (non-sweep) operation; artifacts land in cfg.out_dir, the
/// record in <out_dir>/record.json.
RunRecord run(const ExperimentConfig& cfg);

/// Full driver including sweep expansion and the worker pool. Returns the
/// process exit status (0 iff every assertion of every child passed).
int run_from_file(const std::string& config_path, const std::string& out_override,
                  long long seed_override, int jobs_override);

}  // namespace rfwave
