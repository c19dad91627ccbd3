#pragma once

#include "config.hpp"
#include "table_io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace selprior::cli {

struct ExperimentContext {
    std::string id;
    std::string scale = "desk"; // "paper" or "desk"
    std::uint64_t seed = 20240601;
    int threads = 1;
    KvConfig config; // overrides, section = experiment id
};

std::vector<std::string> experiment_ids();
bool is_experiment(const std::string& id);

// Default settings of an experiment, as ready-to-edit config text.
std::string describe_experiment(const std::string& id);

// Runs the experiment and returns the result table; metadata carries the
// effective settings, seeds, runtimes and any derived quantities.
ResultTable run_experiment(const ExperimentContext& ctx);

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace selprior::cli
