#include "fvlab/model.hpp"

#include <cmath>

#include "fvlab/errors.hpp"

namespace fvlab {

void HypothesisConstants::validate() const {
    std::vector<std::string> bad;
    if (!(a0 > 0.0)) bad.push_back("bounds.a0 must be > 0");
    if (!(A > 0.0)) bad.push_back("bounds.A must be > 0");
    if (!(c0 > 0.0 && c0 < C0)) bad.push_back("bounds must satisfy 0 < c0 < C0");
    if (!(k_g >= 0.0)) bad.push_back("bounds.kg must be >= 0");
    if (!bad.empty()) throw ConfigError(bad);
}

void DiffusionModel::init_coefficients(Coefficients& c) const {
    c.s.resize(env_dim_, env_dim_);
    c.m.assign(env_dim_, 0.0);
    c.sigma.resize(space_dim_, space_dim_);
    c.eta.assign(space_dim_, 0.0);
    c.kappa = 0.0;
}

void DiffusionModel::require_inside(const Vec& x) const {
    if (!domain_.contains(x))
        throw DomainViolationError("eval_coefficients: position outside domain");
}

namespace {

// Drifting/scaled Brownian motion family; covers bm, bm_drift and the
// time-inhomogeneous sinusoidal drift.
class BrownianModel final : public DiffusionModel {
  public:
    enum class DriftKind { None, Constant, Sinusoidal };

    BrownianModel(std::string name, Domain domain, const ModelSpec& spec, DriftKind drift)
        : DiffusionModel(std::move(name), 0, std::move(domain), spec.bounds),
          sigma_(spec.sigma),
          kappa_(spec.kappa),
          drift_kind_(drift),
          drift_(spec.drift),
          omega_(spec.omega) {
        if (drift_kind_ != DriftKind::None) {
            if (drift_.empty()) drift_.assign(space_dim_, 0.0);
            if (static_cast<int>(drift_.size()) != space_dim_)
                throw ConfigError("model.drift dimension does not match the domain");
        }
    }

    void eval(double t, const Vec& e, const Vec& x, Coefficients& out) const override {
        (void)e;
        require_inside(x);
        out.sigma.set_identity(sigma_);
        switch (drift_kind_) {
            case DriftKind::None:
                std::fill(out.eta.begin(), out.eta.end(), 0.0);
                break;
            case DriftKind::Constant:
                out.eta = drift_;
                break;
            case DriftKind::Sinusoidal: {
                const double a = std::sin(omega_ * t);
                for (int k = 0; k < space_dim_; ++k) out.eta[k] = drift_[k] * a;
                break;
            }
        }
        out.kappa = kappa_;
    }

    FgSplit fg(double, const Vec&, const Vec&) const override {
        return {sigma_ * sigma_, 0.0};
    }

  private:
    double sigma_;
    double kappa_;
    DriftKind drift_kind_;
    Vec drift_;
    double omega_;
};

// sigma(x) = scale * (1 + phi(x)) * I; exercises a nonzero g.
class PhiSigmaModel final : public DiffusionModel {
  public:
    PhiSigmaModel(Domain domain, const ModelSpec& spec)
        : DiffusionModel("bm_phi_sigma", 0, std::move(domain), spec.bounds),
          scale_(spec.sigma),
          kappa_(spec.kappa) {}

    void eval(double, const Vec&, const Vec& x, Coefficients& out) const override {
        require_inside(x);
        out.sigma.set_identity(scale_ * (1.0 + domain_.phi(x)));
        std::fill(out.eta.begin(), out.eta.end(), 0.0);
        out.kappa = kappa_;
    }

    FgSplit fg(double, const Vec&, const Vec& x) const override {
        // (f + g) = scale^2 (1 + phi)^2, with the phi-free part in f.
        const double p = domain_.phi(x);
        const double s2 = scale_ * scale_;
        return {s2, s2 * (2.0 * p + p * p)};
    }

  private:
    double scale_;
    double kappa_;
};

// Mean-reverting scalar environment driving the position drift: de = -theta e
// dt + s0 dbeta, eta = e * coupling.
class OuEnvModel final : public DiffusionModel {
  public:
    OuEnvModel(Domain domain, const ModelSpec& spec)
        : DiffusionModel("ou_env", 1, std::move(domain), spec.bounds),
          sigma_(spec.sigma),
          kappa_(spec.kappa),
          theta_(spec.theta),
          env_sigma_(spec.env_sigma),
          coupling_(spec.env_coupling) {
        if (coupling_.empty()) coupling_.assign(space_dim_, 0.0);
        if (static_cast<int>(coupling_.size()) != space_dim_)
            throw ConfigError("model.env_coupling dimension does not match the domain");
        env_lo_ = {-spec.env_halfwidth};
        env_hi_ = {spec.env_halfwidth};
        env_init_ = {spec.env_init};
    }

    void eval(double, const Vec& e, const Vec& x, Coefficients& out) const override {
        require_inside(x);
        out.s(0, 0) = env_sigma_;
        out.m[0] = -theta_ * e[0];
        out.sigma.set_identity(sigma_);
        for (int k = 0; k < space_dim_; ++k) out.eta[k] = e[0] * coupling_[k];
        out.kappa = kappa_;
    }

    FgSplit fg(double, const Vec&, const Vec&) const override {
        return {sigma_ * sigma_, 0.0};
    }

  private:
    double sigma_;
    double kappa_;
    double theta_;
    double env_sigma_;
    Vec coupling_;
};

}  // namespace

std::shared_ptr<const DiffusionModel> make_model(const ModelSpec& spec, const Domain& domain) {
    spec.bounds.validate();
    if (spec.sigma < 0.0) throw ConfigError("model.sigma must be >= 0");
    if (spec.kappa < 0.0) throw ConfigError("model.kappa must be >= 0");
    if (spec.name == "bm")
        return std::make_shared<BrownianModel>("bm", domain, spec,
                                               BrownianModel::DriftKind::None);
    if (spec.name == "bm_drift")
        return std::make_shared<BrownianModel>("bm_drift", domain, spec,
                                               BrownianModel::DriftKind::Constant);
    if (spec.name == "bm_sin_drift")
        return std::make_shared<BrownianModel>("bm_sin_drift", domain, spec,
                                               BrownianModel::DriftKind::Sinusoidal);
    if (spec.name == "bm_phi_sigma")
        return std::make_shared<PhiSigmaModel>(domain, spec);
    if (spec.name == "ou_env")
        return std::make_shared<OuEnvModel>(domain, spec);
    throw ConfigError("unknown model name: " + spec.name);
}

Coefficients eval_coefficients(const DiffusionModel& m, double t, const Vec& e, const Vec& x) {
    Coefficients c;
    m.init_coefficients(c);
    m.eval(t, e, x, c);
    return c;
}

FgSplit fg_decomposition(const DiffusionModel& m, const Domain& domain, double t,
                         const Vec& e, const Vec& x) {
    const Vec grad = domain.grad_phi(x);  // throws on non-smooth points
    Coefficients c;
    m.init_coefficients(c);
    m.eval(t, e, x, c);
    const double quad = quadratic_form_mmt(c.sigma, grad);
    const FgSplit split = m.fg(t, e, x);
    if (std::abs(split.f + split.g - quad) > 1e-10)
        throw FvError("fg_decomposition: declared split does not match sigma sigma*");
    return split;
}

}  // namespace fvlab
