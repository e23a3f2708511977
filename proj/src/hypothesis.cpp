#include "fvlab/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fvlab/errors.hpp"
#include "fvlab/rng.hpp"

namespace fvlab {

const ClauseResult* HypothesisReport::find(const std::string& id) const {
    for (const auto& c : clauses)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

// Tracks the sample that exceeds `bound` by the largest margin.
struct WorstTracker {
    double margin = -std::numeric_limits<double>::infinity();
    double value = 0.0;
    HypothesisSample sample;

    void offer(double violation_margin, double v, const HypothesisSample& s) {
        if (violation_margin > margin) {
            margin = violation_margin;
            value = v;
            sample = s;
        }
    }
};

ClauseResult finish(const std::string& id, double bound, const WorstTracker& w,
                    std::string note = "", bool strict = false) {
    ClauseResult r;
    r.id = id;
    r.bound = bound;
    r.pass = strict ? w.margin < 0.0 : !(w.margin > 0.0);
    r.worst_value = w.value;
    r.worst = w.sample;
    r.note = std::move(note);
    return r;
}

// Two-sided clause: value strictly inside (lo, hi); reports whichever side
// came closest to (or past) its bound.
ClauseResult range_clause(const std::string& id, const WorstTracker& lo_w,
                          const WorstTracker& hi_w, double lo, double hi) {
    const bool low_worse = lo_w.margin >= hi_w.margin;
    ClauseResult r = finish(id, low_worse ? lo : hi, low_worse ? lo_w : hi_w,
                            low_worse ? "lower bound c0" : "upper bound C0",
                            /*strict=*/true);
    r.pass = lo_w.margin < 0.0 && hi_w.margin < 0.0;
    return r;
}

double coefficient_norm(const Coefficients& c) {
    double m = frobenius_norm(c.s);
    m = std::max(m, norm2(c.m));
    m = std::max(m, frobenius_norm(c.sigma));
    m = std::max(m, norm2(c.eta));
    return m;
}

}  // namespace

HypothesisReport validate_dynamics_hypothesis(const DiffusionModel& model,
                                              const Domain& domain, int n_samples,
                                              uint64_t seed, double t_max) {
    if (n_samples < 1) throw ConfigError("validate: n_samples must be >= 1");
    const HypothesisConstants& b = model.declared_bounds();

    HypothesisReport report;
    report.samples_requested = n_samples;
    report.t_max = t_max;

    RngStream rng(seed, 0);
    Vec blo, bhi;
    domain.bounding_box(blo, bhi);
    const int d = model.env_dim();
    const int dp = domain.dim();

    // Stencil of the space finite differences must stay on one smooth piece.
    const double fd_h = 1e-5;
    const double fd_h2 = 1e-4;
    const double smooth_margin = 4.0 * fd_h2;
    const double fd_tol = 1e-4;

    auto sample_env = [&](Vec& e) {
        e.resize(d);
        for (int k = 0; k < d; ++k)
            e[k] = model.env_lo()[k] + (model.env_hi()[k] - model.env_lo()[k]) * rng.uniform01();
    };

    WorstTracker kappa_w, coeff_w, fgid_w, glin_w, f_lo_w, f_hi_w, sum_lo_w, sum_hi_w,
        fder_w;
    long band_used = 0;
    long nonsmooth = 0;

    Coefficients c;
    model.init_coefficients(c);
    Vec x(dp), e;
    HypothesisSample s;

    // Interior samples: the killing-rate bound holds on all of D, not just
    // the band.
    for (int it = 0; it < n_samples; ++it) {
        s.t = t_max * rng.uniform01();
        sample_env(s.e);
        s.x = domain.sample_uniform(rng);
        model.eval(s.t, s.e, s.x, c);
        kappa_w.offer(c.kappa - b.A, c.kappa, s);
    }

    // Band samples.
    long attempts = 0;
    const long max_attempts = 2000L * n_samples + 100000L;
    while (band_used < n_samples && attempts < max_attempts) {
        ++attempts;
        for (int k = 0; k < dp; ++k) x[k] = blo[k] + (bhi[k] - blo[k]) * rng.uniform01();
        const double p = domain.phi(x);
        if (!(p > 0.0 && p < b.a0)) continue;
        if (!domain.smooth_at(x, smooth_margin)) {
            ++nonsmooth;
            continue;
        }
        ++band_used;
        s.t = t_max * rng.uniform01();
        sample_env(s.e);
        s.x = x;

        model.eval(s.t, s.e, s.x, c);
        kappa_w.offer(c.kappa - b.A, c.kappa, s);
        const double cn = coefficient_norm(c);
        coeff_w.offer(cn - b.A, cn, s);

        const Vec grad = domain.grad_phi(s.x);
        const double quad = quadratic_form_mmt(c.sigma, grad);
        const FgSplit fg = model.fg(s.t, s.e, s.x);
        const double mismatch = std::abs(fg.f + fg.g - quad);
        fgid_w.offer(mismatch - 1e-10, mismatch, s);

        glin_w.offer(std::abs(fg.g) - b.k_g * p - 1e-12, std::abs(fg.g), s);
        f_lo_w.offer(b.c0 - fg.f, fg.f, s);
        f_hi_w.offer(fg.f - b.C0, fg.f, s);
        const double sum = fg.f + fg.g;
        sum_lo_w.offer(b.c0 - sum, sum, s);
        sum_hi_w.offer(sum - b.C0, sum, s);

        // Finite differences of f: first order in t, first and second order
        // in each environment and space coordinate.
        auto f_at = [&](double t, const Vec& ev, const Vec& xv) {
            return model.fg(t, ev, xv).f;
        };
        {
            const double tl = std::max(0.0, s.t - fd_h);
            const double th = s.t + fd_h;
            const double dfd = (f_at(th, s.e, s.x) - f_at(tl, s.e, s.x)) / (th - tl);
            fder_w.offer(std::abs(dfd) - b.A - fd_tol, std::abs(dfd), s);
        }
        Vec ep = s.e;
        for (int k = 0; k < d; ++k) {
            const double e0 = s.e[k];
            ep[k] = e0 + fd_h;
            const double fp = f_at(s.t, ep, s.x);
            ep[k] = e0 - fd_h;
            const double fm = f_at(s.t, ep, s.x);
            ep[k] = e0;
            const double d1 = (fp - fm) / (2.0 * fd_h);
            fder_w.offer(std::abs(d1) - b.A - fd_tol, std::abs(d1), s);
            ep[k] = e0 + fd_h2;
            const double fp2 = f_at(s.t, ep, s.x);
            ep[k] = e0 - fd_h2;
            const double fm2 = f_at(s.t, ep, s.x);
            ep[k] = e0;
            const double d2 =
                (fp2 - 2.0 * f_at(s.t, s.e, s.x) + fm2) / (fd_h2 * fd_h2);
            fder_w.offer(std::abs(d2) - b.A - fd_tol, std::abs(d2), s);
        }
        Vec xp = s.x;
        for (int k = 0; k < dp; ++k) {
            const double x0 = s.x[k];
            xp[k] = x0 + fd_h;
            const double fp = f_at(s.t, s.e, xp);
            xp[k] = x0 - fd_h;
            const double fm = f_at(s.t, s.e, xp);
            const double d1 = (fp - fm) / (2.0 * fd_h);
            fder_w.offer(std::abs(d1) - b.A - fd_tol, std::abs(d1), s);
            xp[k] = x0 + fd_h2;
            const double fp2 = f_at(s.t, s.e, xp);
            xp[k] = x0 - fd_h2;
            const double fm2 = f_at(s.t, s.e, xp);
            xp[k] = x0;
            const double d2 =
                (fp2 - 2.0 * f_at(s.t, s.e, s.x) + fm2) / (fd_h2 * fd_h2);
            fder_w.offer(std::abs(d2) - b.A - fd_tol, std::abs(d2), s);
        }
    }
    if (band_used < n_samples)
        throw FvError("validate: band sampling failed; a0 too small for this domain?");

    report.band_samples_used = static_cast<int>(band_used);
    report.nonsmooth_fraction =
        static_cast<double>(nonsmooth) / static_cast<double>(nonsmooth + band_used);

    report.clauses.push_back(finish("kappa_bound", b.A, kappa_w));
    report.clauses.push_back(finish("coefficient_bound", b.A, coeff_w));
    report.clauses.push_back(finish("fg_identity", 1e-10, fgid_w));
    report.clauses.push_back(finish("g_linear_bound", 0.0, glin_w,
                                    "bound is k_g * phi(x) per sample"));
    report.clauses.push_back(range_clause("f_range", f_lo_w, f_hi_w, b.c0, b.C0));
    report.clauses.push_back(
        range_clause("fg_sum_range", sum_lo_w, sum_hi_w, b.c0, b.C0));
    report.clauses.push_back(finish("f_derivative_bound", b.A, fder_w,
                                    "finite differences; time range [0, t_max]"));
    {
        ClauseResult smooth;
        smooth.id = "phi_smoothness";
        smooth.pass = true;
        smooth.worst_value = report.nonsmooth_fraction;
        smooth.bound = 1.0;
        smooth.note = "fraction of band samples skipped as non-smooth";
        report.clauses.push_back(smooth);
    }

    report.all_pass = true;
    for (const auto& cl : report.clauses) report.all_pass = report.all_pass && cl.pass;
    return report;
}

}  // namespace fvlab
