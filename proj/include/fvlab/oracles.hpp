#pragma once

#include <cstdint>
#include <vector>

#include "fvlab/engine.hpp"
#include "fvlab/stats.hpp"

namespace fvlab {

// Survivors of M independent killed paths at horizon t: an unbiased sample
// from the conditional law given survival (no particle interaction).
struct ConditionalSample {
    double t = 0.0;
    std::vector<Vec> survivors;
    long attempts = 0;
    double survival_rate = 0.0;

    EmpiricalMeasure measure() const;
};

// Simulates `attempts` single particles with the same stepping kernel (and
// dt) as the particle system and keeps those alive at time t. Throws
// AllKilledError when nothing survives.
ConditionalSample rejection_conditional(const DiffusionModel& model, const Domain& domain,
                                        const InitSpec& init, double t, long attempts,
                                        double dt, uint64_t seed,
                                        const StepOptions& opt = {});

// Leading Dirichlet eigenpair of (1/2) d^2/dx^2 on an interval, discretized
// by second differences on n interior grid points and solved by inverse
// power iteration. The eigenvector is normalized to a probability density
// (trapezoid rule, zero boundary values).
struct SpectralQSD {
    double lo = 0.0;
    double hi = 1.0;
    Vec grid;      // n interior nodes
    Vec density;   // density values at the nodes
    double eigenvalue = 0.0;

    // CDF of the piecewise-linear density (zero at the endpoints).
    double cdf_at(double x) const;

  private:
    friend SpectralQSD spectral_qsd_interval(const Domain& domain, int n);
    Vec cum_;  // cumulative mass at [lo, grid..., hi]
};

SpectralQSD spectral_qsd_interval(const Domain& domain, int n);

// Kolmogorov distance between two spectral densities on the same interval.
double kolmogorov_between_densities(const SpectralQSD& a, const SpectralQSD& b);

}  // namespace fvlab
