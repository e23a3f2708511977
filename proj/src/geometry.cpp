#include "fvlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fvlab/errors.hpp"

namespace fvlab {

Domain Domain::interval(double a, double b) {
    if (!(a < b)) throw ConfigError("interval requires a < b");
    Domain d;
    d.kind_ = DomainKind::Interval;
    d.dim_ = 1;
    d.lo_ = {a};
    d.hi_ = {b};
    return d;
}

Domain Domain::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size() || lo.empty())
        throw ConfigError("box requires matching lo/hi dimensions");
    for (size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] < hi[k])) throw ConfigError("box requires lo < hi componentwise");
    Domain d;
    d.kind_ = DomainKind::Box;
    d.dim_ = static_cast<int>(lo.size());
    d.lo_ = std::move(lo);
    d.hi_ = std::move(hi);
    return d;
}

Domain Domain::ball(Vec center, double radius) {
    if (center.empty()) throw ConfigError("ball requires a center point");
    if (!(radius > 0.0)) throw ConfigError("ball requires radius > 0");
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.dim_ = static_cast<int>(center.size());
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
}

bool Domain::contains(const Vec& x) const {
    switch (kind_) {
        case DomainKind::Interval:
            return x[0] > lo_[0] && x[0] < hi_[0];
        case DomainKind::Box:
            for (int k = 0; k < dim_; ++k)
                if (!(x[k] > lo_[k] && x[k] < hi_[k])) return false;
            return true;
        case DomainKind::Ball:
            return dist2(x, center_) < radius_;
    }
    return false;
}

double Domain::phi(const Vec& x) const {
    switch (kind_) {
        case DomainKind::Interval: {
            const double d = std::min(x[0] - lo_[0], hi_[0] - x[0]);
            return std::max(0.0, d);
        }
        case DomainKind::Box: {
            double d = std::numeric_limits<double>::infinity();
            for (int k = 0; k < dim_; ++k)
                d = std::min(d, std::min(x[k] - lo_[k], hi_[k] - x[k]));
            return std::max(0.0, d);
        }
        case DomainKind::Ball:
            return std::max(0.0, radius_ - dist2(x, center_));
    }
    return 0.0;
}

namespace {

// Index of the nearest box face as 2*axis + side, with the runner-up gap
// reported so callers can detect ties.
int nearest_face(const Vec& x, const Vec& lo, const Vec& hi, int dim, double& gap) {
    int best = -1;
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim; ++k) {
        const double dl = x[k] - lo[k];
        const double dh = hi[k] - x[k];
        const double dmin = std::min(dl, dh);
        const int face = 2 * k + (dh < dl ? 1 : 0);
        if (dmin < d1) {
            d2 = d1;
            d1 = dmin;
            best = face;
        } else if (dmin < d2) {
            d2 = dmin;
        }
        // Both faces of the same axis can tie (thin box midplane).
        const double dmax = std::max(dl, dh);
        if (dmax >= d1 && dmax < d2) d2 = dmax;
    }
    gap = d2 - d1;
    return best;
}

}  // namespace

bool Domain::smooth_at(const Vec& x, double margin) const {
    if (!contains(x)) return false;
    switch (kind_) {
        case DomainKind::Interval:
            return std::abs((x[0] - lo_[0]) - (hi_[0] - x[0])) > margin;
        case DomainKind::Box: {
            double gap = 0.0;
            nearest_face(x, lo_, hi_, dim_, gap);
            return gap > margin;
        }
        case DomainKind::Ball:
            return dist2(x, center_) > margin;
    }
    return false;
}

Vec Domain::grad_phi(const Vec& x) const {
    if (!contains(x)) throw DomainViolationError("grad_phi: point outside domain");
    switch (kind_) {
        case DomainKind::Interval: {
            const double dl = x[0] - lo_[0];
            const double dh = hi_[0] - x[0];
            if (dl == dh) throw NonSmoothPointError("grad_phi: midpoint of interval");
            return {dl < dh ? 1.0 : -1.0};
        }
        case DomainKind::Box: {
            double gap = 0.0;
            const int face = nearest_face(x, lo_, hi_, dim_, gap);
            if (gap <= 0.0) throw NonSmoothPointError("grad_phi: equidistant box faces");
            Vec g(dim_, 0.0);
            g[face / 2] = (face % 2 == 0) ? 1.0 : -1.0;
            return g;
        }
        case DomainKind::Ball: {
            const double r = dist2(x, center_);
            if (r == 0.0) throw NonSmoothPointError("grad_phi: ball center");
            Vec g(dim_);
            for (int k = 0; k < dim_; ++k) g[k] = -(x[k] - center_[k]) / r;
            return g;
        }
    }
    throw NonSmoothPointError("grad_phi: unreachable");
}

Mat Domain::hess_phi(const Vec& x) const {
    if (!contains(x)) throw DomainViolationError("hess_phi: point outside domain");
    switch (kind_) {
        case DomainKind::Interval:
        case DomainKind::Box: {
            // Flat faces; reuse grad_phi for the smoothness check.
            (void)grad_phi(x);
            return Mat(dim_, dim_);
        }
        case DomainKind::Ball: {
            const double r = dist2(x, center_);
            if (r == 0.0) throw NonSmoothPointError("hess_phi: ball center");
            // H = (u u^T - |u|^2 I) / |u|^3 with u = x - center
            Mat h(dim_, dim_);
            const double r3 = r * r * r;
            for (int i = 0; i < dim_; ++i) {
                const double ui = x[i] - center_[i];
                for (int j = 0; j < dim_; ++j) {
                    const double uj = x[j] - center_[j];
                    h(i, j) = ui * uj / r3;
                }
                h(i, i) -= 1.0 / r;
            }
            return h;
        }
    }
    throw NonSmoothPointError("hess_phi: unreachable");
}

void Domain::bounding_box(Vec& lo, Vec& hi) const {
    if (kind_ == DomainKind::Ball) {
        lo.resize(dim_);
        hi.resize(dim_);
        for (int k = 0; k < dim_; ++k) {
            lo[k] = center_[k] - radius_;
            hi[k] = center_[k] + radius_;
        }
    } else {
        lo = lo_;
        hi = hi_;
    }
}

double Domain::max_phi() const {
    switch (kind_) {
        case DomainKind::Interval:
            return 0.5 * (hi_[0] - lo_[0]);
        case DomainKind::Box: {
            double m = std::numeric_limits<double>::infinity();
            for (int k = 0; k < dim_; ++k) m = std::min(m, 0.5 * (hi_[k] - lo_[k]));
            return m;
        }
        case DomainKind::Ball:
            return radius_;
    }
    return 0.0;
}

double Domain::min_extent() const {
    Vec lo, hi;
    bounding_box(lo, hi);
    double m = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < lo.size(); ++k) m = std::min(m, hi[k] - lo[k]);
    return m;
}

Vec Domain::sample_uniform(RngStream& rng) const {
    Vec lo, hi;
    bounding_box(lo, hi);
    Vec x(dim_);
    for (int tries = 0; tries < 10000; ++tries) {
        for (int k = 0; k < dim_; ++k)
            x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform01();
        if (contains(x)) return x;
    }
    throw FvError("sample_uniform: rejection sampling failed");
}

Vec Domain::point_at_distance(double delta, int face) const {
    if (!(delta > 0.0 && delta < max_phi()))
        throw ConfigError("point_at_distance: delta outside (0, max_phi)");
    switch (kind_) {
        case DomainKind::Interval:
            return {face == 0 ? lo_[0] + delta : hi_[0] - delta};
        case DomainKind::Box: {
            const int axis = face / 2;
            if (axis < 0 || axis >= dim_)
                throw ConfigError("point_at_distance: face index out of range");
            Vec x(dim_);
            for (int k = 0; k < dim_; ++k) x[k] = 0.5 * (lo_[k] + hi_[k]);
            x[axis] = (face % 2 == 0) ? lo_[axis] + delta : hi_[axis] - delta;
            return x;
        }
        case DomainKind::Ball: {
            Vec x = center_;
            x[0] += radius_ - delta;
            return x;
        }
    }
    throw ConfigError("point_at_distance: unreachable");
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DomainKind::Interval:
            os << "interval(" << lo_[0] << ", " << hi_[0] << ")";
            break;
        case DomainKind::Box:
            os << "box(d=" << dim_ << ")";
            break;
        case DomainKind::Ball:
            os << "ball(d=" << dim_ << ", r=" << radius_ << ")";
            break;
    }
    return os.str();
}

BoundaryBand::BoundaryBand(double width) : a(width) {
    if (!(width > 0.0)) throw ConfigError("boundary band width must be > 0");
}

bool in_band(const Domain& d, const Vec& x, const BoundaryBand& band) {
    if (!d.contains(x)) return false;
    return d.phi(x) < band.a;
}

}  // namespace fvlab
