#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fvlab/engine.hpp"
#include "fvlab/model.hpp"

namespace fvlab {

enum class ExperimentKind {
    Tightness,
    Convergence,
    NonExplosion,
    Compliance,
    Hypothesis,
    Qsd,
};

std::string experiment_name(ExperimentKind k);

// Everything a run needs, parsed from the flat key-value config format.
// Seeds are mandatory: there is no wall-clock fallback anywhere.
struct ExperimentConfig {
    int schema = 1;
    ExperimentKind kind = ExperimentKind::Tightness;

    Domain domain = Domain::interval(0.0, 1.0);
    ModelSpec model;
    std::string policy = "fleming_viot";
    InitSpec init = InitSpec::uniform();

    std::vector<int> n_values;
    double dt = 1e-4;
    double t0 = 0.25;
    std::vector<double> horizons;
    std::vector<double> a_values;
    double gamma = 0.25;
    int replicas = 2;
    long attempts = 100000;  // rejection-oracle paths
    uint64_t seed = 0;
    std::string out_dir = "out";
    double cap_multiplier = 50.0;
    bool bridge = false;

    // Verdict thresholds (all pinned in the config, echoed to summary.json).
    double epsilon = 0.1;       // tightness target for the boundary mass
    int n_eps = 2;              // tightness: uniformity claimed for N >= n_eps
    double a_ref = 0.02;        // tightness: band width for the oracle cross-check
    double oracle_abs = 0.03;   // tightness: |estimate - oracle| tolerance
    double ks_threshold = 0.05; // convergence / qsd
    bool expect_compliant = true;
    int trials = 10000;         // compliance jumps
    int samples = 2000;         // hypothesis sample points
    double t_max = 1.0;         // hypothesis time range
    int grid_n = 1025;          // qsd spectral grid size
    int pair_i = 0;
    int pair_j = 1;

    SystemConfig system_config(int n) const;
    JumpPolicy make_policy() const;

    // Canonical key-value rendering of the effective config; hashing and the
    // config echo both use it.
    std::string canonical() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

uint64_t fnv1a64(const std::string& text);

}  // namespace fvlab
