#pragma once

#include <string>

#include "fvlab/rng.hpp"
#include "fvlab/types.hpp"

namespace fvlab {

enum class DomainKind { Interval, Box, Ball };

// A bounded open domain with a closed-form distance-to-boundary function.
// Only shapes whose distance function has an analytic gradient and Hessian
// are supported: interval, axis-aligned box, Euclidean ball.
class Domain {
  public:
    static Domain interval(double a, double b);
    static Domain box(Vec lo, Vec hi);
    static Domain ball(Vec center, double radius);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }

    // Strict interior test; boundary points are outside.
    bool contains(const Vec& x) const;

    // Distance to the boundary, clamped to 0 outside the closure. Total.
    double phi(const Vec& x) const;

    // True when phi is differentiable at x (interior, away from box ridges
    // and the ball center). A positive margin widens the excluded set, which
    // finite-difference samplers use to keep their stencils on one smooth
    // piece.
    bool smooth_at(const Vec& x, double margin = 0.0) const;

    // Gradient and Hessian of phi. Throw DomainViolationError outside D and
    // NonSmoothPointError on the non-differentiable set.
    Vec grad_phi(const Vec& x) const;
    Mat hess_phi(const Vec& x) const;

    // Axis-aligned bounding box of the closure.
    void bounding_box(Vec& lo, Vec& hi) const;

    // sup over D of phi (interval: half length; box: half of min extent;
    // ball: radius).
    double max_phi() const;

    // Smallest axis extent of the bounding box.
    double min_extent() const;

    // Rejection-samples a point uniformly distributed on D.
    Vec sample_uniform(RngStream& rng) const;

    // Deterministic interior point at distance delta from the boundary.
    // `face` picks the face for interval (0: lower, 1: upper) and box
    // (2*axis + side); ignored for a ball.
    Vec point_at_distance(double delta, int face = 0) const;

    // Interval accessors (1-d only).
    double interval_lo() const { return lo_[0]; }
    double interval_hi() const { return hi_[0]; }

    std::string describe() const;

  private:
    Domain() = default;

    DomainKind kind_ = DomainKind::Interval;
    int dim_ = 1;
    Vec lo_, hi_;      // interval / box
    Vec center_;       // ball
    double radius_ = 0.0;
};

// Boundary band D^a = {x in D : phi(x) < a}, a > 0.
struct BoundaryBand {
    explicit BoundaryBand(double width);
    double a;
};

inline double phi(const Domain& d, const Vec& x) { return d.phi(x); }

bool in_band(const Domain& d, const Vec& x, const BoundaryBand& band);

}  // namespace fvlab
