#include "fvlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fvlab/errors.hpp"
#include "fvlab/rng.hpp"

namespace fvlab {

EmpiricalMeasure snapshot(const SystemState& state) {
    EmpiricalMeasure mu;
    mu.t = state.clock();
    mu.dim = state.particles.empty() ? 0 : static_cast<int>(state.particles[0].x.size());
    mu.positions.reserve(state.particles.size());
    for (const auto& p : state.particles) mu.positions.push_back(p.x);
    return mu;
}

EmpiricalMeasure measure_from_positions(double t, std::vector<Vec> positions) {
    EmpiricalMeasure mu;
    mu.t = t;
    mu.dim = positions.empty() ? 0 : static_cast<int>(positions[0].size());
    mu.positions = std::move(positions);
    return mu;
}

double boundary_mass(const EmpiricalMeasure& mu, const Domain& domain, double a) {
    if (!(a > 0.0)) throw RangeError("boundary_mass: a must be > 0");
    if (mu.positions.empty()) return 0.0;
    long hits = 0;
    for (const auto& x : mu.positions) hits += domain.phi(x) < a ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(mu.positions.size());
}

namespace {

std::vector<double> sorted_first_coord(const EmpiricalMeasure& mu) {
    if (mu.dim != 1)
        throw DimensionError("kolmogorov_distance: only 1-d measures are supported");
    std::vector<double> xs;
    xs.reserve(mu.positions.size());
    for (const auto& p : mu.positions) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    return xs;
}

}  // namespace

double kolmogorov_distance(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2) {
    const std::vector<double> xs = sorted_first_coord(mu1);
    const std::vector<double> ys = sorted_first_coord(mu2);
    if (xs.empty() || ys.empty())
        throw RangeError("kolmogorov_distance: empty measure");
    const double n = static_cast<double>(xs.size());
    const double m = static_cast<double>(ys.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double kolmogorov_vs_cdf(const EmpiricalMeasure& mu,
                         const std::function<double(double)>& cdf) {
    const std::vector<double> xs = sorted_first_coord(mu);
    if (xs.empty()) throw RangeError("kolmogorov_vs_cdf: empty measure");
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
        const double f = cdf(xs[k]);
        d = std::max(d, std::abs(static_cast<double>(k + 1) / n - f));
        d = std::max(d, std::abs(static_cast<double>(k) / n - f));
    }
    return d;
}

double histogram_l1(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                    const Domain& domain, int bins_per_axis) {
    if (bins_per_axis < 1) throw BinError("histogram_l1: need at least one bin per axis");
    if (mu1.dim != mu2.dim || mu1.dim != domain.dim())
        throw DimensionError("histogram_l1: dimension mismatch");
    Vec lo, hi;
    domain.bounding_box(lo, hi);
    const int d = domain.dim();
    size_t n_cells = 1;
    for (int k = 0; k < d; ++k) n_cells *= static_cast<size_t>(bins_per_axis);

    auto cell_of = [&](const Vec& x) -> size_t {
        size_t idx = 0;
        for (int k = 0; k < d; ++k) {
            if (x[k] < lo[k] || x[k] > hi[k])
                throw BinError("histogram_l1: atom outside the binned region");
            int c = static_cast<int>((x[k] - lo[k]) / (hi[k] - lo[k]) * bins_per_axis);
            c = std::min(c, bins_per_axis - 1);
            idx = idx * static_cast<size_t>(bins_per_axis) + static_cast<size_t>(c);
        }
        return idx;
    };

    std::vector<double> h1(n_cells, 0.0), h2(n_cells, 0.0);
    for (const auto& x : mu1.positions) h1[cell_of(x)] += 1.0 / mu1.positions.size();
    for (const auto& x : mu2.positions) h2[cell_of(x)] += 1.0 / mu2.positions.size();
    double s = 0.0;
    for (size_t c = 0; c < n_cells; ++c) s += std::abs(h1[c] - h2[c]);
    return s;
}

TightnessTable tightness_sweep(const TightnessGrid& grid, const DiffusionModel& model,
                               const Domain& domain, const JumpPolicy& policy,
                               const SystemConfig& base, int replicas, double t0,
                               uint64_t base_seed) {
    if (replicas < 2) throw ConfigError("tightness_sweep: replicas must be >= 2");
    if (!(t0 > 0.0)) throw ConfigError("tightness_sweep: t0 must be > 0");
    for (double T : grid.horizons)
        if (T < t0) throw ConfigError("tightness_sweep: every horizon must satisfy T >= t0");

    TightnessTable table;
    for (size_t ni = 0; ni < grid.n_values.size(); ++ni) {
        for (size_t ti = 0; ti < grid.horizons.size(); ++ti) {
            const double horizon = grid.horizons[ti];
            std::vector<std::vector<double>> masses(grid.a_values.size());
            for (auto& v : masses) v.reserve(static_cast<size_t>(replicas));

            for (int r = 0; r < replicas; ++r) {
                SystemConfig cfg = base;
                cfg.n = grid.n_values[ni];
                const uint64_t seed = derive_seed(
                    base_seed, {static_cast<uint64_t>(ni), static_cast<uint64_t>(ti),
                                static_cast<uint64_t>(r)});
                SystemState st = init_system(cfg, model, domain, seed);
                run(st, model, domain, policy, horizon);
                const EmpiricalMeasure mu = snapshot(st);
                for (size_t ai = 0; ai < grid.a_values.size(); ++ai)
                    masses[ai].push_back(boundary_mass(mu, domain, grid.a_values[ai]));
            }

            for (size_t ai = 0; ai < grid.a_values.size(); ++ai) {
                const MeanStderr ms = mean_stderr(masses[ai]);
                TightnessRow row;
                row.n = grid.n_values[ni];
                row.horizon = horizon;
                row.a = grid.a_values[ai];
                row.replicas = replicas;
                row.estimate = ms.mean;
                row.stderr_ = ms.stderr_;
                table.rows.push_back(row);
            }
        }
    }
    return table;
}

std::vector<PairProximityStat> pair_proximity(const DiffusionModel& model,
                                              const Domain& domain,
                                              const JumpPolicy& policy, int n, int i,
                                              int j, double gamma,
                                              const std::vector<double>& a_values,
                                              double t0, int replicas,
                                              const SystemConfig& base, uint64_t seed) {
    if (i == j) throw ConfigError("pair_proximity: indices must differ");
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw ConfigError("pair_proximity: particle index out of range");
    const HypothesisConstants& b = model.declared_bounds();
    const double a_max = gamma * std::sqrt(b.c0 / b.C0);
    for (double a : a_values)
        if (!(a < a_max))
            throw RangeError("pair_proximity: a must be < gamma * sqrt(c0/C0)");

    SystemConfig cfg = base;
    cfg.n = n;
    cfg.init = InitSpec::point(domain.point_at_distance(gamma, 0));

    std::vector<std::vector<double>> hits(a_values.size());
    for (auto& v : hits) v.reserve(static_cast<size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        SystemState st =
            init_system(cfg, model, domain, derive_seed(seed, {static_cast<uint64_t>(r)}));
        run(st, model, domain, policy, t0);
        const double pi = domain.phi(st.particles[static_cast<size_t>(i)].x);
        const double pj = domain.phi(st.particles[static_cast<size_t>(j)].x);
        for (size_t ai = 0; ai < a_values.size(); ++ai)
            hits[ai].push_back(pi <= a_values[ai] && pj <= a_values[ai] ? 1.0 : 0.0);
    }

    std::vector<PairProximityStat> out;
    for (size_t ai = 0; ai < a_values.size(); ++ai) {
        const MeanStderr ms = mean_stderr(hits[ai]);
        PairProximityStat s;
        s.i = i;
        s.j = j;
        s.gamma = gamma;
        s.a = a_values[ai];
        s.t0 = t0;
        s.replicas = replicas;
        s.estimate = ms.mean;
        s.stderr_ = ms.stderr_;
        out.push_back(s);
    }
    return out;
}

}  // namespace fvlab
