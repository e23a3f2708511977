#pragma once

#include <string>

#include "fvlab/config.hpp"

namespace fvlab {

struct ExperimentResult {
    int exit_code = 0;  // 0 pass, 1 threshold failure, 3 explosion guard
    bool pass = true;
    std::string failure;  // name of the first failed threshold, if any
};

// Runs the configured experiment and writes its artifacts (summary.json plus
// the experiment's CSV/JSON files) under cfg.out_dir. Deterministic: equal
// configs produce byte-identical files. Throws ConfigError for invalid
// configurations.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string git_describe();

}  // namespace fvlab
