#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fvlab/stepper.hpp"

namespace fvlab {

enum class PolicyKind { FlemingViot, WeightedDonor, UniformTeleport };

// Where a killed particle jumps. FlemingViot and WeightedDonor copy the
// state of another particle; UniformTeleport resamples the position
// independently (a deliberately non-compliant control policy).
//
// `h` and `p0` declare the policy's compliance claim: after a jump of
// particle i there should exist, with probability at least p0, a donor j
// with phi(y_i) >= h(phi(y_j)).
struct JumpPolicy {
    PolicyKind kind = PolicyKind::FlemingViot;
    std::function<double(double)> weight;  // WeightedDonor: weight of phi(x_j)
    std::function<double(double)> h = [](double u) { return u; };
    double p0 = 1.0;

    static JumpPolicy fleming_viot();
    static JumpPolicy weighted_donor(std::function<double(double)> w);
    static JumpPolicy uniform_teleport();

    std::string kind_name() const;
};

struct JumpRecord {
    double time = 0.0;
    int particle = -1;
    KillKind kind = KillKind::Hard;
    int donor = -1;  // -1: no donor (teleport)
};

// Ordered jump history plus jumps-per-unit-time-window counters used by the
// explosion guard.
struct JumpLog {
    std::vector<JumpRecord> events;
    std::vector<long> window_counts;

    long total() const { return static_cast<long>(events.size()); }
    long hard_count() const;
    long soft_count() const;
    long max_window() const;

    // Appends and enforces the per-window cap.
    void append(const JumpRecord& r, long cap);
};

struct InitSpec {
    enum class Kind { Point, Uniform, BoundaryOffset };
    Kind kind = Kind::Uniform;
    Vec x0;              // Point
    double delta = 1e-3; // BoundaryOffset
    int face = 0;

    static InitSpec point(Vec x);
    static InitSpec uniform();
    static InitSpec boundary_offset(double delta, int face = 0);
};

struct SystemConfig {
    int n = 2;
    double dt = 1e-4;
    InitSpec init;
    StepOptions step_options;
    double explosion_cap_multiplier = 50.0;
};

// Full state of one particle system. All randomness is addressed through
// (run_seed, stream id, step index), so state carries no generator objects.
struct SystemState {
    int n = 0;
    double dt = 1e-4;
    uint64_t run_seed = 0;
    uint64_t step_index = 0;
    std::vector<Particle> particles;
    JumpLog jump_log;
    StepOptions step_options;
    long explosion_cap = 0;
    StepScratch scratch;

    double clock() const { return dt * static_cast<double>(step_index); }
};

struct RunReport {
    double horizon = 0.0;
    long steps = 0;
    long total_jumps = 0;
    long hard_jumps = 0;
    long soft_jumps = 0;
    long max_window = 0;
    double wall_seconds = 0.0;
};

// Observers fire at fixed times (snapped to the step grid) during run().
struct Observer {
    double time = 0.0;
    std::function<void(const SystemState&)> callback;
};

SystemState init_system(const SystemConfig& config, const DiffusionModel& model,
                        const Domain& domain, uint64_t seed);

// Applies `policy` to the killed particle i: picks a donor (or teleports) and
// rewrites particle i's (e, x) in place. Returns the donor index (-1 for a
// teleport). Only particle i changes.
int resolve_jump(SystemState& state, int i, KillKind kind, const JumpPolicy& policy,
                 const DiffusionModel& model, const Domain& domain, RngStream& rng);

// One synchronized step of every particle, then sequential jump resolution in
// ascending particle index. Returns this step's jump events.
std::vector<JumpRecord> advance(SystemState& state, const DiffusionModel& model,
                                const Domain& domain, const JumpPolicy& policy,
                                double dt);

RunReport run(SystemState& state, const DiffusionModel& model, const Domain& domain,
              const JumpPolicy& policy, double horizon,
              const std::vector<Observer>& observers = {});

// --- Compliance checking ---------------------------------------------------

// A synthetic pre-jump configuration: particle `killed_index` sits on the
// boundary, everyone else strictly inside.
struct KillConfiguration {
    std::vector<Vec> positions;
    int killed_index = 0;
};

using KillConfigGenerator = std::function<KillConfiguration(RngStream&)>;

// Uniform positions with one particle projected onto the boundary.
KillConfigGenerator default_kill_configurations(const Domain& domain, int n_particles);

struct ComplianceReport {
    std::string policy;
    int trials = 0;
    double a_frequency = 0.0;  // exists j != i with phi(y_i) >= h(phi(y_j))
    double b_frequency = 0.0;  // every particle at least as far from the boundary
    double declared_p0 = 1.0;
};

// Samples `trials` jumps from `policy` on generated kill configurations and
// measures how often the post-jump configuration lands in the sets A_i
// (donor-proximity) and B (no particle moved closer to the boundary).
ComplianceReport check_compliance(const JumpPolicy& policy, const Domain& domain,
                                  int trials, const KillConfigGenerator& generator,
                                  uint64_t seed);

// Membership tests, exposed for direct use in tests.
bool in_set_a(const Domain& domain, const std::vector<Vec>& post, int i,
              const std::function<double(double)>& h);
bool in_set_b(const Domain& domain, const std::vector<Vec>& pre,
              const std::vector<Vec>& post);

}  // namespace fvlab
