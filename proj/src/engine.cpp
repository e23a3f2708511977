#include "fvlab/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "fvlab/errors.hpp"

namespace fvlab {

JumpPolicy JumpPolicy::fleming_viot() {
    JumpPolicy p;
    p.kind = PolicyKind::FlemingViot;
    return p;
}

JumpPolicy JumpPolicy::weighted_donor(std::function<double(double)> w) {
    JumpPolicy p;
    p.kind = PolicyKind::WeightedDonor;
    p.weight = std::move(w);
    return p;
}

JumpPolicy JumpPolicy::uniform_teleport() {
    JumpPolicy p;
    p.kind = PolicyKind::UniformTeleport;
    return p;
}

std::string JumpPolicy::kind_name() const {
    switch (kind) {
        case PolicyKind::FlemingViot: return "fleming_viot";
        case PolicyKind::WeightedDonor: return "weighted_donor";
        case PolicyKind::UniformTeleport: return "uniform_teleport";
    }
    return "?";
}

long JumpLog::hard_count() const {
    long n = 0;
    for (const auto& e : events) n += e.kind == KillKind::Hard ? 1 : 0;
    return n;
}

long JumpLog::soft_count() const { return total() - hard_count(); }

long JumpLog::max_window() const {
    long m = 0;
    for (long c : window_counts) m = std::max(m, c);
    return m;
}

void JumpLog::append(const JumpRecord& r, long cap) {
    const long w = static_cast<long>(std::floor(r.time));
    if (w >= static_cast<long>(window_counts.size()))
        window_counts.resize(static_cast<size_t>(w) + 1, 0);
    events.push_back(r);
    if (++window_counts[static_cast<size_t>(w)] > cap)
        throw ExplosionGuardError("explosion guard: jump count exceeded cap in window",
                                  w, window_counts[static_cast<size_t>(w)], cap);
}

InitSpec InitSpec::point(Vec x) {
    InitSpec s;
    s.kind = Kind::Point;
    s.x0 = std::move(x);
    return s;
}

InitSpec InitSpec::uniform() {
    InitSpec s;
    s.kind = Kind::Uniform;
    return s;
}

InitSpec InitSpec::boundary_offset(double delta, int face) {
    InitSpec s;
    s.kind = Kind::BoundaryOffset;
    s.delta = delta;
    s.face = face;
    return s;
}

SystemState init_system(const SystemConfig& config, const DiffusionModel& model,
                        const Domain& domain, uint64_t seed) {
    if (config.n < 2) throw ConfigError("system requires N >= 2 particles");
    if (!(config.dt > 0.0)) throw ConfigError("dt must be > 0");

    SystemState st;
    st.n = config.n;
    st.dt = config.dt;
    st.run_seed = seed;
    st.step_options = config.step_options;
    const double a = std::max(model.declared_bounds().A, 1.0);
    st.explosion_cap = static_cast<long>(
        std::ceil(config.explosion_cap_multiplier * config.n * a));

    RngStream init_rng(seed, kInitStreamId);
    st.particles.resize(static_cast<size_t>(config.n));

    Vec x0;
    switch (config.init.kind) {
        case InitSpec::Kind::Point:
            if (static_cast<int>(config.init.x0.size()) != domain.dim())
                throw ConfigError("init point dimension does not match the domain");
            if (!domain.contains(config.init.x0))
                throw ConfigError("init point is outside the domain");
            x0 = config.init.x0;
            break;
        case InitSpec::Kind::BoundaryOffset:
            if (!(config.init.delta > 0.0) || config.init.delta >= 0.5 * domain.min_extent())
                throw ConfigError("init boundary offset must be in (0, extent/2)");
            x0 = domain.point_at_distance(config.init.delta, config.init.face);
            break;
        case InitSpec::Kind::Uniform:
            break;
    }

    for (auto& p : st.particles) {
        p.t = 0.0;
        p.e = model.env_init();
        p.x = config.init.kind == InitSpec::Kind::Uniform ? domain.sample_uniform(init_rng)
                                                          : x0;
    }
    return st;
}

namespace {

int select_donor(const JumpPolicy& policy, const Domain& domain,
                 const std::vector<Particle>& particles, int i, RngStream& rng) {
    const int n = static_cast<int>(particles.size());
    if (policy.kind == PolicyKind::FlemingViot) {
        const int k = static_cast<int>(rng.uniform01() * (n - 1));
        const int j = k >= i ? k + 1 : k;
        return std::min(j, n - 1);
    }
    // WeightedDonor: probability proportional to weight(phi(x_j)).
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        total += policy.weight(domain.phi(particles[static_cast<size_t>(j)].x));
    }
    if (!(total > 0.0))
        throw NoDonorError("weighted donor selection: all weights are zero");
    double u = rng.uniform01() * total;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        u -= policy.weight(domain.phi(particles[static_cast<size_t>(j)].x));
        if (u <= 0.0) return j;
    }
    for (int j = n - 1; j >= 0; --j)
        if (j != i) return j;
    throw NoDonorError("weighted donor selection: no candidate");
}

}  // namespace

int resolve_jump(SystemState& state, int i, KillKind kind, const JumpPolicy& policy,
                 const DiffusionModel& model, const Domain& domain, RngStream& rng) {
    (void)kind;
    (void)model;
    Particle& p = state.particles[static_cast<size_t>(i)];
    if (policy.kind == PolicyKind::UniformTeleport) {
        p.x = domain.sample_uniform(rng);
        return -1;
    }
    const int j = select_donor(policy, domain, state.particles, i, rng);
    const Particle& donor = state.particles[static_cast<size_t>(j)];
    p.e = donor.e;
    p.x = donor.x;
    return j;
}

std::vector<JumpRecord> advance(SystemState& state, const DiffusionModel& model,
                                const Domain& domain, const JumpPolicy& policy,
                                double dt) {
    if (!(dt > 0.0)) throw InvalidStepError("advance: dt must be > 0");

    // Diffusion sub-step. Kills are collected and resolved afterwards so the
    // resolution order is by particle index, not by scheduling.
    std::vector<std::pair<int, KillKind>> killed;
    for (int i = 0; i < state.n; ++i) {
        RngStream rng(state.run_seed, static_cast<uint32_t>(i));
        rng.set_step(state.step_index);
        const StepResult res = step(model, domain, state.particles[static_cast<size_t>(i)],
                                    dt, rng, state.step_options, state.scratch);
        state.particles[static_cast<size_t>(i)] = res.state;
        if (!res.alive()) killed.emplace_back(i, res.kind);
    }

    std::vector<JumpRecord> events;
    if (!killed.empty()) {
        RngStream jump_rng(state.run_seed, kJumpStreamId);
        jump_rng.set_step(state.step_index);
        for (const auto& [i, kind] : killed) {
            const int donor = resolve_jump(state, i, kind, policy, model, domain, jump_rng);
            JumpRecord rec;
            rec.time = state.particles[static_cast<size_t>(i)].t;
            rec.particle = i;
            rec.kind = kind;
            rec.donor = donor;
            state.jump_log.append(rec, state.explosion_cap);
            events.push_back(rec);
        }
    }
    ++state.step_index;
    return events;
}

RunReport run(SystemState& state, const DiffusionModel& model, const Domain& domain,
              const JumpPolicy& policy, double horizon,
              const std::vector<Observer>& observers) {
    if (horizon < 0.0) throw ConfigError("run: horizon must be >= 0");
    const long n_steps = std::lround(horizon / state.dt);

    // Observer times snap to the step grid.
    std::vector<std::pair<long, const Observer*>> schedule;
    for (const auto& ob : observers) {
        if (ob.time < 0.0 || ob.time > horizon + 0.5 * state.dt)
            throw ConfigError("observer time outside [0, horizon]");
        schedule.emplace_back(std::lround(ob.time / state.dt), &ob);
    }
    std::stable_sort(schedule.begin(), schedule.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    const auto t_start = std::chrono::steady_clock::now();
    size_t next_ob = 0;
    const long start_step = static_cast<long>(state.step_index);
    for (long k = 0; k <= n_steps; ++k) {
        while (next_ob < schedule.size() && schedule[next_ob].first == k) {
            schedule[next_ob].second->callback(state);
            ++next_ob;
        }
        if (k == n_steps) break;
        advance(state, model, domain, policy, state.dt);
    }
    const auto t_end = std::chrono::steady_clock::now();

    RunReport rep;
    rep.horizon = horizon;
    rep.steps = static_cast<long>(state.step_index) - start_step;
    rep.total_jumps = state.jump_log.total();
    rep.hard_jumps = state.jump_log.hard_count();
    rep.soft_jumps = state.jump_log.soft_count();
    rep.max_window = state.jump_log.max_window();
    rep.wall_seconds = std::chrono::duration<double>(t_end - t_start).count();
    return rep;
}

KillConfigGenerator default_kill_configurations(const Domain& domain, int n_particles) {
    if (n_particles < 2) throw ConfigError("kill configuration requires N >= 2");
    return [&domain, n_particles](RngStream& rng) {
        KillConfiguration cfg;
        cfg.positions.resize(static_cast<size_t>(n_particles));
        for (auto& x : cfg.positions) x = domain.sample_uniform(rng);
        cfg.killed_index = static_cast<int>(rng.uniform01() * n_particles);
        cfg.killed_index = std::min(cfg.killed_index, n_particles - 1);
        // Project the killed particle onto the boundary so phi = 0 exactly.
        Vec& xi = cfg.positions[static_cast<size_t>(cfg.killed_index)];
        switch (domain.kind()) {
            case DomainKind::Interval:
                xi[0] = rng.uniform01() < 0.5 ? domain.interval_lo() : domain.interval_hi();
                break;
            case DomainKind::Box: {
                Vec lo, hi;
                domain.bounding_box(lo, hi);
                int best_axis = 0;
                bool best_side_hi = false;
                double best = std::numeric_limits<double>::infinity();
                for (size_t k = 0; k < lo.size(); ++k) {
                    if (xi[k] - lo[k] < best) {
                        best = xi[k] - lo[k];
                        best_axis = static_cast<int>(k);
                        best_side_hi = false;
                    }
                    if (hi[k] - xi[k] < best) {
                        best = hi[k] - xi[k];
                        best_axis = static_cast<int>(k);
                        best_side_hi = true;
                    }
                }
                xi[static_cast<size_t>(best_axis)] =
                    best_side_hi ? hi[static_cast<size_t>(best_axis)]
                                 : lo[static_cast<size_t>(best_axis)];
                break;
            }
            case DomainKind::Ball: {
                Vec lo, hi;
                domain.bounding_box(lo, hi);
                Vec center(lo.size());
                for (size_t k = 0; k < lo.size(); ++k) center[k] = 0.5 * (lo[k] + hi[k]);
                const double r = 0.5 * (hi[0] - lo[0]);
                double nrm = dist2(xi, center);
                if (nrm == 0.0) {
                    xi[0] = center[0] + r;
                    for (size_t k = 1; k < xi.size(); ++k) xi[k] = center[k];
                } else {
                    for (size_t k = 0; k < xi.size(); ++k)
                        xi[k] = center[k] + (xi[k] - center[k]) * (r / nrm);
                }
                break;
            }
        }
        return cfg;
    };
}

bool in_set_a(const Domain& domain, const std::vector<Vec>& post, int i,
              const std::function<double(double)>& h) {
    const double pi = domain.phi(post[static_cast<size_t>(i)]);
    for (size_t j = 0; j < post.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        if (pi >= h(domain.phi(post[j]))) return true;
    }
    return false;
}

bool in_set_b(const Domain& domain, const std::vector<Vec>& pre,
              const std::vector<Vec>& post) {
    for (size_t k = 0; k < pre.size(); ++k)
        if (domain.phi(post[k]) < domain.phi(pre[k])) return false;
    return true;
}

ComplianceReport check_compliance(const JumpPolicy& policy, const Domain& domain,
                                  int trials, const KillConfigGenerator& generator,
                                  uint64_t seed) {
    if (trials < 1) throw ConfigError("check_compliance: trials must be >= 1");
    RngStream rng(seed, 0);
    long a_hits = 0;
    long b_hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        rng.set_step(static_cast<uint64_t>(trial));
        const KillConfiguration cfg = generator(rng);
        const int i = cfg.killed_index;
        const int n = static_cast<int>(cfg.positions.size());

        // Apply the policy to a synthetic state (environments unused).
        std::vector<Vec> post = cfg.positions;
        if (policy.kind == PolicyKind::UniformTeleport) {
            post[static_cast<size_t>(i)] = domain.sample_uniform(rng);
        } else {
            std::vector<Particle> ps(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) ps[static_cast<size_t>(j)].x = cfg.positions[static_cast<size_t>(j)];
            const int j = select_donor(policy, domain, ps, i, rng);
            post[static_cast<size_t>(i)] = cfg.positions[static_cast<size_t>(j)];
        }

        a_hits += in_set_a(domain, post, i, policy.h) ? 1 : 0;
        b_hits += in_set_b(domain, cfg.positions, post) ? 1 : 0;
    }
    ComplianceReport rep;
    rep.policy = policy.kind_name();
    rep.trials = trials;
    rep.a_frequency = static_cast<double>(a_hits) / trials;
    rep.b_frequency = static_cast<double>(b_hits) / trials;
    rep.declared_p0 = policy.p0;
    return rep;
}

}  // namespace fvlab
