#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fvlab/errors.hpp"
#include "fvlab/experiments.hpp"

namespace {

int execute(const std::string& config_path, const std::string& out_override,
            const std::string& seed_override, std::optional<fvlab::ExperimentKind> force) {
    using namespace fvlab;
    try {
        ExperimentConfig cfg = load_config_file(config_path);
        if (force) cfg.kind = *force;
        if (!out_override.empty()) cfg.out_dir = out_override;

        // Seed precedence: --seed flag, then FVLAB_SEED, then the config.
        std::string seed_str = seed_override;
        if (seed_str.empty()) {
            if (const char* env = std::getenv("FVLAB_SEED")) seed_str = env;
        }
        if (!seed_str.empty()) {
            try {
                size_t pos = 0;
                cfg.seed = std::stoull(seed_str, &pos);
                if (pos != seed_str.size()) throw std::invalid_argument("seed");
            } catch (const std::exception&) {
                std::cerr << "error: invalid seed override '" << seed_str << "'\n";
                return 2;
            }
        }

        const ExperimentResult result = run_experiment(cfg);
        if (result.exit_code == 0) {
            std::cout << "pass (" << cfg.out_dir << "/summary.json)\n";
        } else {
            std::cout << "FAIL: " << result.failure << " (" << cfg.out_dir
                      << "/summary.json)\n";
        }
        return result.exit_code;
    } catch (const ConfigError& ex) {
        std::cerr << "config error:\n";
        for (const auto& msg : ex.violations) std::cerr << "  " << msg << "\n";
        return 2;
    } catch (const ExplosionGuardError& ex) {
        std::cerr << "explosion guard tripped: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fvlab: killed-diffusion particle system simulator and statistics"};
    app.require_subcommand(1);

    std::string config_path, out_dir, seed;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config file")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed, "seed override (also: FVLAB_SEED)");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "run the experiment named in the config");
    add_common(cmd_run);
    CLI::App* cmd_hyp = app.add_subcommand(
        "check-hypotheses", "validate the model's declared coefficient bounds");
    add_common(cmd_hyp);
    CLI::App* cmd_qsd =
        app.add_subcommand("qsd", "spectral quasi-stationary density and FV comparison");
    add_common(cmd_qsd);

    CLI11_PARSE(app, argc, argv);

    std::optional<fvlab::ExperimentKind> force;
    if (cmd_hyp->parsed()) force = fvlab::ExperimentKind::Hypothesis;
    if (cmd_qsd->parsed()) force = fvlab::ExperimentKind::Qsd;
    return execute(config_path, out_dir, seed, force);
}
