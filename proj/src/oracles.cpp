#include "fvlab/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "fvlab/errors.hpp"
#include "fvlab/rng.hpp"
#include "fvlab/stepper.hpp"

namespace fvlab {

EmpiricalMeasure ConditionalSample::measure() const {
    return measure_from_positions(t, survivors);
}

ConditionalSample rejection_conditional(const DiffusionModel& model, const Domain& domain,
                                        const InitSpec& init, double t, long attempts,
                                        double dt, uint64_t seed, const StepOptions& opt) {
    if (!(t > 0.0)) throw ConfigError("rejection_conditional: t must be > 0");
    if (attempts < 1) throw ConfigError("rejection_conditional: attempts must be >= 1");
    const long n_steps = std::lround(t / dt);

    Vec x0;
    if (init.kind == InitSpec::Kind::Point) {
        if (!domain.contains(init.x0))
            throw ConfigError("rejection_conditional: init point outside domain");
        x0 = init.x0;
    } else if (init.kind == InitSpec::Kind::BoundaryOffset) {
        x0 = domain.point_at_distance(init.delta, init.face);
    }

    ConditionalSample out;
    out.t = t;
    out.attempts = attempts;

    StepScratch scratch;
    Particle p;
    for (long path = 0; path < attempts; ++path) {
        RngStream rng(seed, static_cast<uint32_t>(path));
        p.t = 0.0;
        p.e = model.env_init();
        if (init.kind == InitSpec::Kind::Uniform) {
            // Step 0 is reserved for the initial draw; dynamics start at 1.
            rng.set_step(0);
            p.x = domain.sample_uniform(rng);
        } else {
            p.x = x0;
        }
        bool alive = true;
        for (long k = 0; k < n_steps; ++k) {
            rng.set_step(static_cast<uint64_t>(k) + 1);
            const StepResult res = step(model, domain, p, dt, rng, opt, scratch);
            if (!res.alive()) {
                alive = false;
                break;
            }
            p = res.state;
        }
        if (alive) out.survivors.push_back(p.x);
    }
    out.survival_rate =
        static_cast<double>(out.survivors.size()) / static_cast<double>(attempts);
    if (out.survivors.empty())
        throw AllKilledError("rejection_conditional: no surviving path; "
                             "increase attempts or reduce t");
    return out;
}

namespace {

// Solves the tridiagonal system (diag, off) x = b, constant coefficients.
void solve_tridiag(double diag, double off, const Vec& b, Vec& x, Vec& scratch) {
    const size_t n = b.size();
    Vec& c = scratch;
    c.resize(n);
    x.resize(n);
    c[0] = off / diag;
    x[0] = b[0] / diag;
    for (size_t k = 1; k < n; ++k) {
        const double m = diag - off * c[k - 1];
        c[k] = off / m;
        x[k] = (b[k] - off * x[k - 1]) / m;
    }
    for (size_t k = n - 1; k-- > 0;)
        x[k] -= c[k] * x[k + 1];
}

}  // namespace

SpectralQSD spectral_qsd_interval(const Domain& domain, int n) {
    if (domain.kind() != DomainKind::Interval)
        throw DimensionError("spectral_qsd_interval: interval domains only");
    if (n < 3) throw ConfigError("spectral_qsd_interval: need n >= 3 grid points");

    const double lo = domain.interval_lo();
    const double hi = domain.interval_hi();
    const double h = (hi - lo) / (n + 1);
    // -(1/2) u'' on the grid: diag 1/h^2, off-diagonal -1/(2 h^2).
    const double diag = 1.0 / (h * h);
    const double off = -0.5 / (h * h);
    const double a_norm = diag + 2.0 * std::abs(off);  // row-sum norm

    Vec v(static_cast<size_t>(n), 1.0);
    Vec av(static_cast<size_t>(n)), next, scratch;

    auto apply = [&](const Vec& u, Vec& out) {
        out.resize(u.size());
        for (size_t k = 0; k < u.size(); ++k) {
            double s = diag * u[k];
            if (k > 0) s += off * u[k - 1];
            if (k + 1 < u.size()) s += off * u[k + 1];
            out[k] = s;
        }
    };

    double lambda = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 2000; ++iter) {
        solve_tridiag(diag, off, v, next, scratch);
        const double nrm = norm2(next);
        for (auto& u : next) u /= nrm;
        v = next;
        apply(v, av);
        lambda = dot(v, av);
        double res = 0.0;
        for (size_t k = 0; k < v.size(); ++k) {
            const double r = av[k] - lambda * v[k];
            res += r * r;
        }
        res = std::sqrt(res) / a_norm;
        if (res <= 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("spectral_qsd_interval: inverse iteration stalled");

    // The leading eigenvector has one sign; orient it positive.
    double total = 0.0;
    for (double u : v) total += u;
    if (total < 0.0)
        for (auto& u : v) u = -u;
    for (auto& u : v) u = std::max(u, 0.0);

    SpectralQSD q;
    q.lo = lo;
    q.hi = hi;
    q.eigenvalue = lambda;
    q.grid.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) q.grid[static_cast<size_t>(k)] = lo + h * (k + 1);

    // Trapezoid normalization with zero boundary values.
    double mass = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double fa = k == 0 ? 0.0 : v[static_cast<size_t>(k - 1)];
        const double fb = k == n ? 0.0 : v[static_cast<size_t>(k)];
        mass += 0.5 * (fa + fb) * h;
    }
    q.density = v;
    for (auto& u : q.density) u /= mass;

    q.cum_.assign(static_cast<size_t>(n) + 2, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double fa = k == 0 ? 0.0 : q.density[static_cast<size_t>(k - 1)];
        const double fb = k == n ? 0.0 : q.density[static_cast<size_t>(k)];
        q.cum_[static_cast<size_t>(k + 1)] = q.cum_[static_cast<size_t>(k)] + 0.5 * (fa + fb) * h;
    }
    return q;
}

double SpectralQSD::cdf_at(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const int n = static_cast<int>(grid.size());
    const double h = (hi - lo) / (n + 1);
    const int cell = std::min(static_cast<int>((x - lo) / h), n);
    const double x_left = lo + h * cell;
    const double f_left = cell == 0 ? 0.0 : density[static_cast<size_t>(cell - 1)];
    const double f_right = cell == n ? 0.0 : density[static_cast<size_t>(cell)];
    const double s = x - x_left;
    const double slope = (f_right - f_left) / h;
    return cum_[static_cast<size_t>(cell)] + f_left * s + 0.5 * slope * s * s;
}

double kolmogorov_between_densities(const SpectralQSD& a, const SpectralQSD& b) {
    double d = 0.0;
    for (double x : a.grid) d = std::max(d, std::abs(a.cdf_at(x) - b.cdf_at(x)));
    for (double x : b.grid) d = std::max(d, std::abs(a.cdf_at(x) - b.cdf_at(x)));
    return d;
}

}  // namespace fvlab
