#include "fvlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "fvlab/errors.hpp"
#include "fvlab/hypothesis.hpp"
#include "fvlab/io.hpp"
#include "fvlab/oracles.hpp"
#include "fvlab/stats.hpp"

#ifndef FVLAB_GIT_DESCRIBE
#define FVLAB_GIT_DESCRIBE "unknown"
#endif

namespace fvlab {

using json = nlohmann::ordered_json;

std::string git_describe() { return FVLAB_GIT_DESCRIBE; }

namespace {

std::string hex16(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

// Thresholds collected during a run; each becomes one verdict line in
// summary.json and the overall exit code.
struct Verdicts {
    json rows = json::array();
    bool pass = true;
    std::string first_failure;

    void add(const std::string& name, double value, double bound, bool ok) {
        rows.push_back({{"name", name}, {"value", value}, {"bound", bound}, {"pass", ok}});
        if (!ok && pass) {
            pass = false;
            first_failure = name;
        }
        pass = pass && ok;
    }
};

struct RunStatsCsv {
    CsvWriter csv;
    explicit RunStatsCsv(const ExperimentConfig& cfg, uint64_t hash)
        : csv(out_path(cfg, "jumps.csv"), cfg.seed, hash,
              {"N", "T", "replica", "seed", "steps", "total_jumps", "hard_jumps",
               "soft_jumps", "max_window"}) {}

    void add(int n, double horizon, int replica, uint64_t seed, const RunReport& rep) {
        csv.row({std::to_string(n), fmt17(horizon), std::to_string(replica),
                 std::to_string(seed), std::to_string(rep.steps),
                 std::to_string(rep.total_jumps), std::to_string(rep.hard_jumps),
                 std::to_string(rep.soft_jumps), std::to_string(rep.max_window)});
    }
};

void write_measure_csv(const ExperimentConfig& cfg, uint64_t hash, double t,
                       const EmpiricalMeasure& mu) {
    char name[64];
    std::snprintf(name, sizeof(name), "measure_%g.csv", t);
    std::vector<std::string> cols;
    for (int k = 0; k < mu.dim; ++k) cols.push_back("x" + std::to_string(k));
    CsvWriter csv(out_path(cfg, name), cfg.seed, hash, cols);
    std::vector<std::string> cells(static_cast<size_t>(mu.dim));
    for (const auto& x : mu.positions) {
        for (int k = 0; k < mu.dim; ++k) cells[static_cast<size_t>(k)] = fmt17(x[k]);
        csv.row(cells);
    }
}

json report_to_json(const HypothesisReport& rep) {
    json j;
    j["all_pass"] = rep.all_pass;
    j["samples_requested"] = rep.samples_requested;
    j["band_samples_used"] = rep.band_samples_used;
    j["nonsmooth_fraction"] = rep.nonsmooth_fraction;
    j["t_max"] = rep.t_max;
    j["clauses"] = json::array();
    for (const auto& c : rep.clauses) {
        json wc;
        wc["t"] = c.worst.t;
        wc["e"] = c.worst.e;
        wc["x"] = c.worst.x;
        j["clauses"].push_back({{"id", c.id},
                                {"pass", c.pass},
                                {"worst_value", c.worst_value},
                                {"bound", c.bound},
                                {"worst_sample", wc},
                                {"note", c.note}});
    }
    return j;
}

// --- experiment bodies ------------------------------------------------------

void run_nonexplosion(const ExperimentConfig& cfg, uint64_t hash, Verdicts& v, json& res) {
    const auto model = make_model(cfg.model, cfg.domain);
    const JumpPolicy policy = cfg.make_policy();
    RunStatsCsv jumps(cfg, hash);

    long total_jumps = 0;
    long max_window = 0;
    long guard_trips = 0;
    for (size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
        for (size_t ti = 0; ti < cfg.horizons.size(); ++ti) {
            for (int r = 0; r < cfg.replicas; ++r) {
                const uint64_t seed = derive_seed(
                    cfg.seed, {static_cast<uint64_t>(ni), static_cast<uint64_t>(ti),
                               static_cast<uint64_t>(r)});
                SystemState st =
                    init_system(cfg.system_config(cfg.n_values[ni]), *model, cfg.domain, seed);
                try {
                    const RunReport rep =
                        run(st, *model, cfg.domain, policy, cfg.horizons[ti]);
                    jumps.add(cfg.n_values[ni], cfg.horizons[ti], r, seed, rep);
                    total_jumps += rep.total_jumps;
                    max_window = std::max(max_window, rep.max_window);
                } catch (const ExplosionGuardError&) {
                    ++guard_trips;
                }
            }
        }
    }
    res["total_jumps"] = total_jumps;
    res["max_window"] = max_window;
    res["guard_trips"] = guard_trips;
    v.add("explosion_guard_trips", static_cast<double>(guard_trips), 0.0, guard_trips == 0);
}

void run_tightness(const ExperimentConfig& cfg, uint64_t hash, Verdicts& v, json& res) {
    const auto model = make_model(cfg.model, cfg.domain);
    const JumpPolicy policy = cfg.make_policy();

    TightnessGrid grid{cfg.n_values, cfg.horizons, cfg.a_values};
    const TightnessTable table =
        tightness_sweep(grid, *model, cfg.domain, policy, cfg.system_config(2),
                        cfg.replicas, cfg.t0, cfg.seed);

    {
        CsvWriter csv(out_path(cfg, "tightness.csv"), cfg.seed, hash,
                      {"N", "T", "a", "replicas", "estimate", "stderr"});
        for (const auto& r : table.rows)
            csv.row({std::to_string(r.n), fmt17(r.horizon), fmt17(r.a),
                     std::to_string(r.replicas), fmt17(r.estimate), fmt17(r.stderr_)});
    }

    // A band width a_eps qualifies when every (N >= N_eps, T) cell stays at
    // or below epsilon within 3 standard errors. Report the largest one.
    double a_eps = -1.0;
    double worst_at_a_eps = 0.0;
    std::vector<double> sorted_a = cfg.a_values;
    std::sort(sorted_a.begin(), sorted_a.end(), std::greater<>());
    for (double a : sorted_a) {
        bool ok = true;
        double worst = 0.0;
        for (const auto& r : table.rows) {
            if (r.a != a || r.n < cfg.n_eps) continue;
            worst = std::max(worst, r.estimate - 3.0 * r.stderr_);
            if (r.estimate - 3.0 * r.stderr_ > cfg.epsilon) ok = false;
        }
        if (ok) {
            a_eps = a;
            worst_at_a_eps = worst;
            break;
        }
    }
    res["a_eps"] = a_eps;
    res["epsilon"] = cfg.epsilon;
    res["worst_estimate_minus_3se"] = worst_at_a_eps;
    v.add("tightness_a_eps_found", a_eps, 0.0, a_eps > 0.0);

    // Cross-check the T = t0 boundary mass against the rejection oracle.
    if (cfg.attempts > 0) {
        const ConditionalSample oracle =
            rejection_conditional(*model, cfg.domain, cfg.init, cfg.t0, cfg.attempts,
                                  cfg.dt, derive_seed(cfg.seed, {0x0Au}),
                                  cfg.system_config(2).step_options);
        const double oracle_mass =
            boundary_mass(oracle.measure(), cfg.domain, cfg.a_ref);
        const int n_max = *std::max_element(cfg.n_values.begin(), cfg.n_values.end());
        double fv_mass = -1.0;
        for (const auto& r : table.rows)
            if (r.n == n_max && r.horizon == cfg.t0 && r.a == cfg.a_ref)
                fv_mass = r.estimate;
        if (fv_mass < 0.0)
            throw ConfigError("tightness: a_ref must appear in `a` and t0 in `T` "
                              "for the oracle cross-check");
        res["oracle_survivors"] = static_cast<long>(oracle.survivors.size());
        res["oracle_survival_rate"] = oracle.survival_rate;
        res["oracle_boundary_mass"] = oracle_mass;
        res["fv_boundary_mass_at_a_ref"] = fv_mass;
        v.add("tightness_oracle_abs_diff", std::abs(fv_mass - oracle_mass),
              cfg.oracle_abs, std::abs(fv_mass - oracle_mass) <= cfg.oracle_abs);
    }
}

void run_convergence(const ExperimentConfig& cfg, uint64_t hash, Verdicts& v, json& res) {
    const auto model = make_model(cfg.model, cfg.domain);
    const JumpPolicy policy = cfg.make_policy();
    const double horizon = cfg.horizons.at(0);

    const ConditionalSample oracle =
        rejection_conditional(*model, cfg.domain, cfg.init, horizon, cfg.attempts,
                              cfg.dt, derive_seed(cfg.seed, {0x0Au}),
                              cfg.system_config(2).step_options);
    const EmpiricalMeasure oracle_mu = oracle.measure();
    res["oracle_survivors"] = static_cast<long>(oracle.survivors.size());
    res["oracle_survival_rate"] = oracle.survival_rate;

    RunStatsCsv jumps(cfg, hash);
    std::vector<std::vector<double>> ks(cfg.n_values.size());
    for (size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
        for (int r = 0; r < cfg.replicas; ++r) {
            const uint64_t seed =
                derive_seed(cfg.seed, {static_cast<uint64_t>(ni), static_cast<uint64_t>(r)});
            SystemState st =
                init_system(cfg.system_config(cfg.n_values[ni]), *model, cfg.domain, seed);
            const RunReport rep = run(st, *model, cfg.domain, policy, horizon);
            jumps.add(cfg.n_values[ni], horizon, r, seed, rep);
            const EmpiricalMeasure mu = snapshot(st);
            ks[ni].push_back(kolmogorov_distance(mu, oracle_mu));
            if (ni == 0 && r == 0) write_measure_csv(cfg, hash, horizon, mu);
        }
    }

    res["ks"] = json::array();
    for (size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
        const MeanStderr ms = mean_stderr(ks[ni]);
        res["ks"].push_back({{"N", cfg.n_values[ni]},
                             {"values", ks[ni]},
                             {"mean", ms.mean},
                             {"stderr", ms.stderr_}});
    }
    v.add("convergence_ks", ks[0][0], cfg.ks_threshold, ks[0][0] <= cfg.ks_threshold);

    if (cfg.n_values.size() >= 2) {
        // Paired differences between consecutive N values; the distance must
        // not grow beyond 2 standard errors.
        std::vector<double> diffs;
        for (size_t r = 0; r < ks[0].size() && r < ks[1].size(); ++r)
            diffs.push_back(ks[1][r] - ks[0][r]);
        const MeanStderr ms = mean_stderr(diffs);
        res["ks_diff_mean"] = ms.mean;
        res["ks_diff_stderr"] = ms.stderr_;
        v.add("convergence_monotone_in_n", ms.mean, 2.0 * ms.stderr_,
              ms.mean <= 2.0 * ms.stderr_);
    }
}

void run_qsd(const ExperimentConfig& cfg, uint64_t hash, Verdicts& v, json& res) {
    const auto model = make_model(cfg.model, cfg.domain);
    const JumpPolicy policy = cfg.make_policy();
    const double horizon = cfg.horizons.at(0);
    const int n = cfg.n_values.at(0);

    const SpectralQSD qsd = spectral_qsd_interval(cfg.domain, cfg.grid_n);
    {
        CsvWriter csv(out_path(cfg, "qsd.csv"), cfg.seed, hash, {"grid", "density"});
        for (size_t k = 0; k < qsd.grid.size(); ++k)
            csv.row({fmt17(qsd.grid[k]), fmt17(qsd.density[k])});
    }

    const double len = cfg.domain.interval_hi() - cfg.domain.interval_lo();
    const double lambda_exact = M_PI * M_PI / (2.0 * len * len);
    const double eig_rel_err = std::abs(qsd.eigenvalue - lambda_exact) / lambda_exact;
    res["eigenvalue"] = qsd.eigenvalue;
    res["eigenvalue_expected"] = lambda_exact;

    RunStatsCsv jumps(cfg, hash);
    SystemState st = init_system(cfg.system_config(n), *model, cfg.domain,
                                 derive_seed(cfg.seed, {0u, 0u}));
    const RunReport rep = run(st, *model, cfg.domain, policy, horizon);
    jumps.add(n, horizon, 0, derive_seed(cfg.seed, {0u, 0u}), rep);
    const EmpiricalMeasure mu = snapshot(st);
    write_measure_csv(cfg, hash, horizon, mu);

    const double ks = kolmogorov_vs_cdf(mu, [&](double x) { return qsd.cdf_at(x); });
    res["ks_vs_qsd"] = ks;
    v.add("qsd_ks", ks, cfg.ks_threshold, ks <= cfg.ks_threshold);
    v.add("qsd_eigenvalue_rel_err", eig_rel_err, 1e-3, eig_rel_err <= 1e-3);
}

void run_compliance(const ExperimentConfig& cfg, uint64_t hash, Verdicts& v, json& res) {
    const JumpPolicy policy = cfg.make_policy();
    const int n = cfg.n_values.empty() ? 8 : cfg.n_values[0];
    const ComplianceReport rep =
        check_compliance(policy, cfg.domain, cfg.trials,
                         default_kill_configurations(cfg.domain, n), cfg.seed);
    {
        CsvWriter csv(out_path(cfg, "compliance.csv"), cfg.seed, hash,
                      {"policy", "trials", "a_frequency", "b_frequency", "declared_p0"});
        csv.row({rep.policy, std::to_string(rep.trials), fmt17(rep.a_frequency),
                 fmt17(rep.b_frequency), fmt17(rep.declared_p0)});
    }
    res["policy"] = rep.policy;
    res["a_frequency"] = rep.a_frequency;
    res["b_frequency"] = rep.b_frequency;
    res["declared_p0"] = rep.declared_p0;
    if (cfg.expect_compliant) {
        v.add("compliance_a_frequency", rep.a_frequency, rep.declared_p0,
              rep.a_frequency >= rep.declared_p0 - 1e-12);
        v.add("compliance_b_frequency", rep.b_frequency, 1.0,
              rep.b_frequency >= 1.0 - 1e-12);
    } else {
        v.add("noncompliance_detected", rep.a_frequency, 1.0, rep.a_frequency < 1.0);
    }
}

void run_hypothesis(const ExperimentConfig& cfg, uint64_t hash, Verdicts& v, json& res) {
    const auto model = make_model(cfg.model, cfg.domain);
    const HypothesisReport rep = validate_dynamics_hypothesis(
        *model, cfg.domain, cfg.samples, cfg.seed, cfg.t_max);
    json j = report_to_json(rep);
    j["model"] = cfg.model.name;
    j["domain"] = cfg.domain.describe();
    j["seed"] = cfg.seed;
    j["config"] = hex16(hash);
    write_text_file(out_path(cfg, "hypothesis_report.json"), j.dump(2) + "\n");
    res["all_pass"] = rep.all_pass;
    res["nonsmooth_fraction"] = rep.nonsmooth_fraction;
    for (const auto& c : rep.clauses)
        if (!c.pass) res["failed_clauses"].push_back(c.id);
    v.add("hypothesis_all_clauses", rep.all_pass ? 1.0 : 0.0, 1.0, rep.all_pass);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const uint64_t hash = fnv1a64(cfg.canonical());
    std::filesystem::create_directories(cfg.out_dir);

    Verdicts v;
    json res;
    ExperimentResult result;
    try {
        switch (cfg.kind) {
            case ExperimentKind::NonExplosion: run_nonexplosion(cfg, hash, v, res); break;
            case ExperimentKind::Tightness: run_tightness(cfg, hash, v, res); break;
            case ExperimentKind::Convergence: run_convergence(cfg, hash, v, res); break;
            case ExperimentKind::Qsd: run_qsd(cfg, hash, v, res); break;
            case ExperimentKind::Compliance: run_compliance(cfg, hash, v, res); break;
            case ExperimentKind::Hypothesis: run_hypothesis(cfg, hash, v, res); break;
        }
    } catch (const ExplosionGuardError& ex) {
        result.exit_code = 3;
        result.pass = false;
        result.failure = std::string("explosion_guard: ") + ex.what();
    }

    json summary;
    summary["schema"] = 1;
    summary["experiment"] = experiment_name(cfg.kind);
    summary["seed"] = cfg.seed;
    summary["config_hash"] = hex16(hash);
    summary["binary"] = git_describe();
    summary["results"] = res;
    summary["thresholds"] = v.rows;
    if (result.exit_code == 3) {
        summary["pass"] = false;
        summary["failure"] = result.failure;
    } else {
        summary["pass"] = v.pass;
        if (!v.pass) summary["failure"] = v.first_failure;
        result.pass = v.pass;
        result.failure = v.first_failure;
        result.exit_code = v.pass ? 0 : 1;
    }
    summary["config"] = cfg.canonical();
    write_text_file(out_path(cfg, "summary.json"), summary.dump(2) + "\n");
    return result;
}

}  // namespace fvlab
