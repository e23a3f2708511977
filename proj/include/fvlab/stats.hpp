#pragma once

#include <functional>
#include <vector>

#include "fvlab/engine.hpp"

namespace fvlab {

// Immutable snapshot of the particle positions at one time; atoms carry
// weight 1/N each. Environments are dropped on purpose.
struct EmpiricalMeasure {
    double t = 0.0;
    int dim = 1;
    std::vector<Vec> positions;

    int size() const { return static_cast<int>(positions.size()); }
};

EmpiricalMeasure snapshot(const SystemState& state);
EmpiricalMeasure measure_from_positions(double t, std::vector<Vec> positions);

// Fraction of atoms with phi(x) < a.
double boundary_mass(const EmpiricalMeasure& mu, const Domain& domain, double a);

// Two-sample Kolmogorov statistic, 1-d measures only.
double kolmogorov_distance(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2);

// One-sample Kolmogorov statistic against a continuous CDF.
double kolmogorov_vs_cdf(const EmpiricalMeasure& mu,
                         const std::function<double(double)>& cdf);

// L1 distance between bin masses on a uniform grid over the domain's
// bounding box (bins_per_axis cells per axis).
double histogram_l1(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                    const Domain& domain, int bins_per_axis);

struct TightnessRow {
    int n = 0;
    double horizon = 0.0;
    double a = 0.0;
    int replicas = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
};

struct TightnessTable {
    std::vector<TightnessRow> rows;
};

struct TightnessGrid {
    std::vector<int> n_values;
    std::vector<double> horizons;
    std::vector<double> a_values;
};

// Mean and standard error of the boundary mass at each (N, T, a) over
// independent replica runs. Estimates at different a share the runs of their
// (N, T) cell, so monotonicity in a is exact. Replica seeds are a pure
// function of (base_seed, grid indices, replica id).
TightnessTable tightness_sweep(const TightnessGrid& grid, const DiffusionModel& model,
                               const Domain& domain, const JumpPolicy& policy,
                               const SystemConfig& base, int replicas, double t0,
                               uint64_t base_seed);

struct PairProximityStat {
    int i = 0;
    int j = 1;
    double gamma = 0.0;
    double a = 0.0;
    double t0 = 0.0;
    int replicas = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Estimates P(phi(X_i) <= a and phi(X_j) <= a at t0) for each a, with every
// particle started at distance exactly gamma from the boundary (so the
// entry time of particle i past gamma is 0). Requires a < gamma *
// sqrt(c0/C0) for the model's declared bounds. All a values share runs.
std::vector<PairProximityStat> pair_proximity(const DiffusionModel& model,
                                              const Domain& domain,
                                              const JumpPolicy& policy, int n, int i,
                                              int j, double gamma,
                                              const std::vector<double>& a_values,
                                              double t0, int replicas,
                                              const SystemConfig& base, uint64_t seed);

}  // namespace fvlab
