#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fvlab/model.hpp"

namespace fvlab {

struct HypothesisSample {
    double t = 0.0;
    Vec e;
    Vec x;
};

// One checked clause of the dynamics hypothesis, with the worst violating
// (or closest-to-violating) sample seen.
struct ClauseResult {
    std::string id;
    bool pass = true;
    double worst_value = 0.0;
    double bound = 0.0;
    HypothesisSample worst;
    std::string note;
};

struct HypothesisReport {
    bool all_pass = true;
    int samples_requested = 0;
    int band_samples_used = 0;
    double nonsmooth_fraction = 0.0;
    double t_max = 1.0;
    std::vector<ClauseResult> clauses;

    const ClauseResult* find(const std::string& id) const;
};

// Samples (t, e, x) uniformly over [0, t_max] x E_box x D^{a0} (plus interior
// points for the killing rate) and checks the declared constants clause by
// clause:
//   kappa_bound        kappa <= A on the domain
//   coefficient_bound  |s|, |m|, |sigma|, |eta| <= A on the band
//   fg_identity        f + g matches grad_phi . sigma sigma* . grad_phi
//   g_linear_bound     |g| <= k_g * phi
//   f_range            c0 < f < C0
//   fg_sum_range       c0 < f + g < C0
//   f_derivative_bound finite differences of f bounded by A
//   phi_smoothness     informational: fraction of band points skipped as
//                      non-smooth (box ridges, ball center)
// Non-smooth sample points are skipped and counted, never treated as
// violations.
HypothesisReport validate_dynamics_hypothesis(const DiffusionModel& model,
                                              const Domain& domain, int n_samples,
                                              uint64_t seed, double t_max = 1.0);

}  // namespace fvlab
