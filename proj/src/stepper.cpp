#include "fvlab/stepper.hpp"

#include <cmath>

#include "fvlab/errors.hpp"

namespace fvlab {

StepResult step(const DiffusionModel& model, const Domain& domain, const Particle& p,
                double dt, RngStream& rng, const StepOptions& opt, StepScratch& scratch) {
    if (!(dt > 0.0)) throw InvalidStepError("step: dt must be > 0");
    if (!scratch.ready) {
        model.init_coefficients(scratch.c);
        scratch.e_next.resize(p.e.size());
        scratch.x_next.resize(p.x.size());
        scratch.ready = true;
    }
    Coefficients& c = scratch.c;
    model.eval(p.t, p.e, p.x, c);

    const double t_next = p.t + dt;

    if (c.kappa > 0.0) {
        const double u = rng.uniform01();
        if (u < -std::expm1(-c.kappa * dt)) {
            StepResult r;
            r.status = StepStatus::Killed;
            r.kind = KillKind::Soft;
            r.state = {t_next, p.e, p.x};
            return r;
        }
    }

    const int d = model.env_dim();
    const int dp = model.space_dim();
    const double sqdt = std::sqrt(dt);

    Vec& e_next = scratch.e_next;
    for (int k = 0; k < d; ++k) e_next[k] = p.e[k] + c.m[k] * dt;
    for (int l = 0; l < d; ++l) {
        const double z = sqdt * rng.normal();
        for (int k = 0; k < d; ++k) e_next[k] += c.s(k, l) * z;
    }

    Vec& x_next = scratch.x_next;
    for (int k = 0; k < dp; ++k) x_next[k] = p.x[k] + c.eta[k] * dt;
    for (int l = 0; l < dp; ++l) {
        const double z = sqdt * rng.normal();
        for (int k = 0; k < dp; ++k) x_next[k] += c.sigma(k, l) * z;
    }

    if (!domain.contains(x_next)) {
        StepResult r;
        r.status = StepStatus::Killed;
        r.kind = KillKind::Hard;
        r.state = {t_next, e_next, p.x};
        return r;
    }

    if (opt.bridge_correction && dp == 1) {
        const double s2 = c.sigma(0, 0) * c.sigma(0, 0);
        if (s2 > 0.0) {
            const double cross =
                std::exp(-2.0 * domain.phi(p.x) * domain.phi(x_next) / (s2 * dt));
            if (rng.uniform01() < cross) {
                StepResult r;
                r.status = StepStatus::Killed;
                r.kind = KillKind::Hard;
                r.state = {t_next, e_next, p.x};
                return r;
            }
        }
    }

    StepResult r;
    r.status = StepStatus::Alive;
    r.state = {t_next, e_next, x_next};
    return r;
}

}  // namespace fvlab
