#pragma once

#include <memory>
#include <string>

#include "fvlab/geometry.hpp"
#include "fvlab/types.hpp"

namespace fvlab {

// Declared constants for the standing assumptions on a model: band width a0,
// uniform coefficient bound A, f-range (c0, C0) and the linear bound k_g on
// the remainder g.
struct HypothesisConstants {
    double a0 = 0.1;
    double A = 2.0;
    double c0 = 0.5;
    double C0 = 2.0;
    double k_g = 1.0;

    void validate() const;
};

// One particle of the system: clock, environment state, position.
struct Particle {
    double t = 0.0;
    Vec e;
    Vec x;
};

// Coefficient values at one (t, e, x): environment noise s (d x d) and drift
// m (d), position noise sigma (d' x d') and drift eta (d'), killing rate
// kappa. Reused across steps; call DiffusionModel::init_coefficients once.
struct Coefficients {
    Mat s;
    Vec m;
    Mat sigma;
    Vec eta;
    double kappa = 0.0;
};

// Declared split of grad_phi . (sigma sigma*) . grad_phi into a smooth part f
// and a remainder g with |g| <= k_g * phi.
struct FgSplit {
    double f = 0.0;
    double g = 0.0;
};

// A time-inhomogeneous, environment-dependent diffusion with killing.
// Built-in models only: every coefficient is closed-form, so the hypothesis
// validator can difference them reliably.
class DiffusionModel {
  public:
    virtual ~DiffusionModel() = default;

    const std::string& name() const { return name_; }
    int env_dim() const { return env_dim_; }
    int space_dim() const { return space_dim_; }
    const HypothesisConstants& declared_bounds() const { return bounds_; }
    const Domain& domain() const { return domain_; }

    // Environment bounding box (empty for env_dim == 0) and initial value.
    const Vec& env_lo() const { return env_lo_; }
    const Vec& env_hi() const { return env_hi_; }
    const Vec& env_init() const { return env_init_; }

    void init_coefficients(Coefficients& c) const;

    // Evaluates all five coefficients at (t, e, x). Throws
    // DomainViolationError when x is outside D.
    virtual void eval(double t, const Vec& e, const Vec& x, Coefficients& out) const = 0;

    // Declared (f, g) split at (t, e, x).
    virtual FgSplit fg(double t, const Vec& e, const Vec& x) const = 0;

  protected:
    DiffusionModel(std::string name, int env_dim, Domain domain,
                   HypothesisConstants bounds)
        : name_(std::move(name)),
          env_dim_(env_dim),
          space_dim_(domain.dim()),
          domain_(std::move(domain)),
          bounds_(bounds) {}

    void require_inside(const Vec& x) const;

    std::string name_;
    int env_dim_;
    int space_dim_;
    Domain domain_;
    HypothesisConstants bounds_;
    Vec env_lo_, env_hi_, env_init_;
};

// Parameters for the built-in model registry.
struct ModelSpec {
    std::string name = "bm";
    double sigma = 1.0;          // isotropic noise scale
    double kappa = 0.0;          // constant soft-killing rate
    Vec drift;                   // bm_drift / bm_sin_drift direction
    double omega = 1.0;          // bm_sin_drift frequency
    double theta = 1.0;          // ou_env mean-reversion rate
    double env_sigma = 0.5;      // ou_env environment noise
    Vec env_coupling;            // ou_env drift = e * coupling
    double env_init = 0.0;       // ou_env initial environment
    double env_halfwidth = 3.0;  // ou_env declared environment box
    HypothesisConstants bounds;
};

// Built-in names: bm, bm_drift, bm_sin_drift, bm_phi_sigma, ou_env.
std::shared_ptr<const DiffusionModel> make_model(const ModelSpec& spec, const Domain& domain);

// Convenience wrapper mirroring the per-operation contract.
Coefficients eval_coefficients(const DiffusionModel& m, double t, const Vec& e, const Vec& x);

// Declared split plus the identity check against the quadratic form
// grad_phi . (sigma sigma*) . grad_phi (within 1e-10). Propagates
// NonSmoothPointError from grad_phi.
FgSplit fg_decomposition(const DiffusionModel& m, const Domain& domain, double t,
                         const Vec& e, const Vec& x);

}  // namespace fvlab
