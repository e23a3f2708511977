// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Heavier than the unit tests; expects an optimized build.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fvlab/config.hpp"
#include "fvlab/errors.hpp"
#include "fvlab/experiments.hpp"
#include "fvlab/hypothesis.hpp"
#include "fvlab/oracles.hpp"
#include "fvlab/stats.hpp"

using namespace fvlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::shared_ptr<const DiffusionModel> bm_unit(const Domain& d) {
    ModelSpec spec;
    spec.name = "bm";
    spec.bounds = {0.1, 2.0, 0.5, 2.0, 1.0};
    return make_model(spec, d);
}

SystemConfig fv_config(int n, double dt, InitSpec init, bool bridge) {
    SystemConfig cfg;
    cfg.n = n;
    cfg.dt = dt;
    cfg.init = std::move(init);
    cfg.step_options.bridge_correction = bridge;
    return cfg;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Non-explosion at desk scale: zero guard trips, finite jump counts.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Domain d = Domain::interval(0.0, 1.0);
    const auto m = bm_unit(d);
    const JumpPolicy fv = JumpPolicy::fleming_viot();
    long total_jumps = 0;
    long trips = 0;
    for (int n : {100, 400}) {
        for (uint64_t r = 0; r < 20; ++r) {
            SystemState st = init_system(fv_config(n, 1e-4, InitSpec::uniform(), false),
                                         *m, d, derive_seed(1001, {static_cast<uint64_t>(n), r}));
            try {
                const RunReport rep = run(st, *m, d, fv, 1.0);
                total_jumps += rep.total_jumps;
            } catch (const ExplosionGuardError&) {
                ++trips;
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "guard trips %ld, total jumps %ld, %.1fs", trips,
                  total_jumps, elapsed_since(t0));
    report(1, "non-explosion", trips == 0 && total_jumps > 0, buf);
}

// 2. Uniform tightness from the worst-case initialization, with the
//    rejection-oracle cross-check at T = t0.
void criterion_2() {
    const auto t0c = std::chrono::steady_clock::now();
    const Domain d = Domain::interval(0.0, 1.0);
    const auto m = bm_unit(d);
    const JumpPolicy fv = JumpPolicy::fleming_viot();
    const double t0 = 0.25;
    const double eps = 0.1;
    const InitSpec init = InitSpec::boundary_offset(1e-3, 0);
    const SystemConfig base = fv_config(2, 1e-4, init, true);

    TightnessGrid grid{{125, 250, 500}, {0.25, 0.5, 1.0}, {0.005, 0.01, 0.02}};
    const TightnessTable table = tightness_sweep(grid, *m, d, fv, base, 50, t0, 2002);

    // a_eps = 0.02 must hold for every N >= 250 and every T, within 3 se.
    const double a_eps = 0.02;
    bool ok = true;
    double worst = 0.0;
    for (const auto& row : table.rows) {
        if (row.a != a_eps || row.n < 250) continue;
        worst = std::max(worst, row.estimate - 3.0 * row.stderr_);
        if (row.estimate - 3.0 * row.stderr_ > eps) ok = false;
    }

    const ConditionalSample oracle = rejection_conditional(
        *m, d, init, t0, 100000, 1e-4, derive_seed(2002, {0xABu}), base.step_options);
    const double oracle_mass = boundary_mass(oracle.measure(), d, a_eps);
    double fv_mass = -1.0;
    for (const auto& row : table.rows)
        if (row.n == 500 && row.horizon == t0 && row.a == a_eps) fv_mass = row.estimate;
    const bool oracle_ok = std::abs(fv_mass - oracle_mass) <= 0.03;

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "a_eps=%.3g worst(est-3se)=%.4f vs eps=%.2f; fv=%.4f oracle=%.4f "
                  "(survivors %zu), %.1fs",
                  a_eps, worst, eps, fv_mass, oracle_mass, oracle.survivors.size(),
                  elapsed_since(t0c));
    report(2, "uniform tightness", ok && oracle_ok, buf);
}

// 3. Convergence to the conditional law, improving as N doubles.
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const Domain d = Domain::interval(0.0, 1.0);
    const auto m = bm_unit(d);
    const JumpPolicy fv = JumpPolicy::fleming_viot();
    const double horizon = 0.2;
    const double dt = 1e-4;
    const InitSpec init = InitSpec::point({0.5});

    const ConditionalSample oracle = rejection_conditional(
        *m, d, init, horizon, 100000, dt, derive_seed(3003, {0xABu}),
        StepOptions{true});
    const EmpiricalMeasure oracle_mu = oracle.measure();

    std::vector<double> ks2000, ks4000;
    for (uint64_t r = 0; r < 10; ++r) {
        for (int n : {2000, 4000}) {
            SystemState st =
                init_system(fv_config(n, dt, init, true), *m, d,
                            derive_seed(3003, {static_cast<uint64_t>(n), r}));
            run(st, *m, d, fv, horizon);
            const double ks = kolmogorov_distance(snapshot(st), oracle_mu);
            (n == 2000 ? ks2000 : ks4000).push_back(ks);
        }
    }
    std::vector<double> diffs;
    for (size_t r = 0; r < ks2000.size(); ++r) diffs.push_back(ks4000[r] - ks2000[r]);
    const MeanStderr md = mean_stderr(diffs);
    const bool ks_ok = ks2000[0] <= 0.05;
    const bool mono_ok = md.mean <= 2.0 * md.stderr_;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "ks(N=2000)=%.4f (<=0.05); mean ks 2000=%.4f 4000=%.4f, paired diff "
                  "%.4f +- %.4f, %.1fs",
                  ks2000[0], mean_stderr(ks2000).mean, mean_stderr(ks4000).mean, md.mean,
                  md.stderr_, elapsed_since(t0));
    report(3, "convergence to conditional law", ks_ok && mono_ok, buf);
}

// 4. Long-time limit matches the spectral quasi-stationary density.
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const Domain d = Domain::interval(0.0, 1.0);
    const auto m = bm_unit(d);
    const SpectralQSD qsd = spectral_qsd_interval(d, 1025);
    const double lambda = M_PI * M_PI / 2.0;
    const double eig_rel = std::abs(qsd.eigenvalue - lambda) / lambda;

    SystemState st = init_system(fv_config(1000, 1e-4, InitSpec::uniform(), true), *m,
                                 d, 4004);
    run(st, *m, d, JumpPolicy::fleming_viot(), 3.0);
    const double ks =
        kolmogorov_vs_cdf(snapshot(st), [&](double x) { return qsd.cdf_at(x); });
    char buf[200];
    std::snprintf(buf, sizeof(buf), "ks=%.4f (<=0.05), eigenvalue rel err %.2e (<=1e-3), %.1fs",
                  ks, eig_rel, elapsed_since(t0));
    report(4, "quasi-stationary limit", ks <= 0.05 && eig_rel <= 1e-3, buf);
}

// 5. Pair-proximity log-decay shape.
void criterion_5() {
    const auto t0c = std::chrono::steady_clock::now();
    const Domain d = Domain::interval(0.0, 1.0);
    const auto m = bm_unit(d);
    const double gamma = 0.25;
    const double t0 = 0.25;
    const std::vector<double> As = {0.02, 0.01, 0.005};
    const SystemConfig base = fv_config(2, 1e-3, InitSpec::uniform(), true);
    const auto stats = pair_proximity(*m, d, JumpPolicy::fleming_viot(), 10, 0, 1,
                                      gamma, As, t0, 40000, base, 5005);

    bool nested = true;
    for (size_t k = 0; k + 1 < stats.size(); ++k)
        if (stats[k + 1].estimate > stats[k].estimate) nested = false;

    const double ratio = std::sqrt(0.5 / 2.0);  // declared c0 / C0
    auto q = [&](const PairProximityStat& s) {
        return s.estimate * std::log(gamma / s.a * ratio);
    };
    auto q_se = [&](const PairProximityStat& s) {
        return s.stderr_ * std::log(gamma / s.a * ratio);
    };
    bool shape = true;
    for (const auto& s : stats)
        if (q(s) > 1.5 * q(stats[0]) + 3.0 * q_se(s)) shape = false;

    std::ostringstream os;
    for (const auto& s : stats)
        os << "p(" << s.a << ")=" << s.estimate << " q=" << q(s) << "; ";
    os << elapsed_since(t0c) << "s";
    report(5, "pair-proximity log decay", nested && shape, os.str());
}

// 6. Jump-measure compliance: the built-in policy always lands in A and B;
//    the teleport control does not.
void criterion_6() {
    const Domain d = Domain::interval(0.0, 1.0);
    const auto gen = default_kill_configurations(d, 8);
    const ComplianceReport fv =
        check_compliance(JumpPolicy::fleming_viot(), d, 10000, gen, 6006);
    const ComplianceReport tp =
        check_compliance(JumpPolicy::uniform_teleport(), d, 10000, gen, 6007);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "fv: A=%.4f B=%.4f (both exactly 1); teleport: A=%.4f (<1)",
                  fv.a_frequency, fv.b_frequency, tp.a_frequency);
    report(6, "jump-measure compliance",
           fv.a_frequency == 1.0 && fv.b_frequency == 1.0 && tp.a_frequency < 1.0, buf);
}

// 7. Coefficient-bound validator: well-declared model passes, misdeclared
//    lower bound fails with a witness.
void criterion_7() {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec good;
    good.name = "bm";
    good.bounds = {0.1, 2.0, 0.5, 2.0, 1.0};
    const HypothesisReport ok =
        validate_dynamics_hypothesis(*make_model(good, d), d, 2000, 7007);

    ModelSpec bad = good;
    bad.bounds.c0 = 1.5;
    const HypothesisReport flagged =
        validate_dynamics_hypothesis(*make_model(bad, d), d, 2000, 7007);
    const ClauseResult* f_range = flagged.find("f_range");
    const bool witness = f_range && !f_range->pass && f_range->worst_value == 1.0 &&
                         d.contains(f_range->worst.x);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "declared bounds pass=%d; misdeclared c0 flagged=%d witness f=%.3f",
                  ok.all_pass ? 1 : 0, witness ? 1 : 0,
                  f_range ? f_range->worst_value : -1.0);
    report(7, "hypothesis validator", ok.all_pass && witness, buf);
}

// 8. Determinism and unit invariants.
void criterion_8() {
    bool all = true;
    std::ostringstream os;

    // byte-identical artifacts under identical config + seed
    {
        const fs::path root = fs::temp_directory_path() / "fvlab_acceptance";
        fs::remove_all(root);
        const std::string cfg_text = R"(
schema = 1
experiment = tightness
domain = interval 0 1
model = bm
seed = 808
N = 16 32
T = 0.1
t0 = 0.1
a = 0.02 0.05
dt = 1e-3
replicas = 4
M = 2000
a_ref = 0.02
init = boundary_offset 0.001 0
bridge = on
epsilon = 0.9
N_eps = 16
oracle_abs = 0.2
)";
        ExperimentConfig c1 = parse_config(cfg_text);
        c1.out_dir = (root / "a").string();
        ExperimentConfig c2 = parse_config(cfg_text);
        c2.out_dir = (root / "b").string();
        run_experiment(c1);
        run_experiment(c2);
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const bool same =
            slurp(root / "a" / "tightness.csv") == slurp(root / "b" / "tightness.csv") &&
            slurp(root / "a" / "summary.json") == slurp(root / "b" / "summary.json");
        os << "byte-identical=" << same << "; ";
        all = all && same;
    }

    // phi is 1-Lipschitz: zero violations on 1e5 random pairs
    {
        const Domain shapes[] = {Domain::interval(0.0, 1.0),
                                 Domain::box({0.0, 0.0}, {1.0, 2.0}),
                                 Domain::ball({0.0, 0.0}, 1.0)};
        long violations = 0;
        RngStream rng(8008, 0);
        for (const Domain& d : shapes) {
            Vec lo, hi;
            d.bounding_box(lo, hi);
            for (int k = 0; k < 100000; ++k) {
                Vec x(static_cast<size_t>(d.dim())), y(static_cast<size_t>(d.dim()));
                for (int c = 0; c < d.dim(); ++c) {
                    x[static_cast<size_t>(c)] =
                        lo[static_cast<size_t>(c)] - 0.5 +
                        (hi[static_cast<size_t>(c)] - lo[static_cast<size_t>(c)] + 1.0) *
                            rng.uniform01();
                    y[static_cast<size_t>(c)] =
                        lo[static_cast<size_t>(c)] - 0.5 +
                        (hi[static_cast<size_t>(c)] - lo[static_cast<size_t>(c)] + 1.0) *
                            rng.uniform01();
                }
                if (std::abs(d.phi(x) - d.phi(y)) > dist2(x, y) + 1e-12) ++violations;
            }
        }
        os << "lipschitz violations=" << violations << "; ";
        all = all && violations == 0;
    }

    // boundary-mass monotonicity on a shared snapshot
    {
        const Domain d = Domain::interval(0.0, 1.0);
        const auto m = bm_unit(d);
        SystemState st =
            init_system(fv_config(200, 1e-3, InitSpec::uniform(), false), *m, d, 818);
        run(st, *m, d, JumpPolicy::fleming_viot(), 0.2);
        const EmpiricalMeasure mu = snapshot(st);
        bool mono = true;
        double prev = 0.0;
        for (double a = 0.005; a <= 0.5; a += 0.005) {
            const double cur = boundary_mass(mu, d, a);
            if (cur < prev) mono = false;
            prev = cur;
        }
        os << "boundary-mass monotone=" << mono << "; ";
        all = all && mono;
    }

    // soft-kill frequency at kappa = 2, dt = 0.01 over 1e5 trials
    {
        const Domain d = Domain::interval(0.0, 1.0);
        ModelSpec spec;
        spec.name = "bm";
        spec.kappa = 2.0;
        const auto m = make_model(spec, d);
        StepScratch scratch;
        int soft = 0;
        const int trials = 100000;
        for (int k = 0; k < trials; ++k) {
            RngStream rng(828, 0);
            rng.set_step(static_cast<uint64_t>(k));
            const StepResult res =
                step(*m, d, {0.0, {}, {0.5}}, 0.01, rng, {}, scratch);
            if (!res.alive() && res.kind == KillKind::Soft) ++soft;
        }
        const double p = -std::expm1(-0.02);
        const double se = std::sqrt(p * (1.0 - p) / trials);
        const double phat = static_cast<double>(soft) / trials;
        const bool okay = std::abs(phat - p) <= 3.0 * se;
        os << "soft-kill freq=" << phat << " target=" << p << " ok=" << okay;
        all = all && okay;
    }

    report(8, "determinism and unit invariants", all, os.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
