#pragma once

#include "fvlab/model.hpp"
#include "fvlab/rng.hpp"

namespace fvlab {

enum class KillKind { Hard, Soft };

struct KillEvent {
    KillKind kind = KillKind::Hard;
    double time = 0.0;
    Particle pre_kill;  // last in-domain state
};

struct StepOptions {
    // Extra hard-kill test with the 1-d Brownian-bridge crossing probability
    // exp(-2 phi(x) phi(x') / (sigma^2 dt)). Off by default; endpoint
    // detection alone is the baseline behaviour.
    bool bridge_correction = false;
};

enum class StepStatus { Alive, Killed };

struct StepResult {
    StepStatus status = StepStatus::Alive;
    Particle state;   // next state when alive; pre-kill state when killed
    KillKind kind = KillKind::Hard;

    bool alive() const { return status == StepStatus::Alive; }
    KillEvent event() const { return {kind, state.t, state}; }
};

// Preallocated working memory for step(); one per worker.
struct StepScratch {
    Coefficients c;
    Vec e_next, x_next;
    bool ready = false;
};

// One Euler-Maruyama step of the (t, e, x) triple with soft-kill resolution
// first, then the move, then hard-kill detection on the proposed position.
// Draw order from `rng` is fixed: soft-kill uniform (only when kappa > 0),
// environment normals, position normals, bridge uniform (only when enabled
// and the endpoint test passed). Pure in (model, p, dt, rng state).
StepResult step(const DiffusionModel& model, const Domain& domain, const Particle& p,
                double dt, RngStream& rng, const StepOptions& opt, StepScratch& scratch);

inline StepResult step(const DiffusionModel& model, const Domain& domain,
                       const Particle& p, double dt, RngStream& rng,
                       const StepOptions& opt = {}) {
    StepScratch scratch;
    return step(model, domain, p, dt, rng, opt, scratch);
}

}  // namespace fvlab
