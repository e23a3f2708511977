#include <doctest.h>

#include <cmath>

#include "fvlab/errors.hpp"
#include "fvlab/geometry.hpp"
#include "fvlab/rng.hpp"

using namespace fvlab;

namespace {

Vec random_point(RngStream& rng, const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (size_t k = 0; k < x.size(); ++k)
        x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform01();
    return x;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("phi on the three shapes") {
    const Domain itv = Domain::interval(0.0, 1.0);
    CHECK(itv.phi({0.25}) == doctest::Approx(0.25));
    CHECK(itv.phi({0.0}) == 0.0);
    CHECK(itv.phi({-0.3}) == 0.0);
    CHECK(itv.phi({1.7}) == 0.0);

    const Domain ball = Domain::ball({0.0, 0.0}, 1.0);
    CHECK(ball.phi({0.6, 0.0}) == doctest::Approx(0.4));
    CHECK(ball.phi({2.0, 0.0}) == 0.0);

    const Domain box = Domain::box({0.0, 0.0}, {1.0, 1.0});
    CHECK(box.phi({0.1, 0.5}) == doctest::Approx(0.1));
    CHECK(box.phi({-0.1, 0.5}) == 0.0);
}

TEST_CASE("in_band") {
    const Domain itv = Domain::interval(0.0, 1.0);
    const BoundaryBand band(0.2);
    CHECK(in_band(itv, {0.05}, band));
    CHECK_FALSE(in_band(itv, {0.5}, band));
    CHECK_FALSE(in_band(itv, {-0.1}, band));
    CHECK_THROWS_AS(BoundaryBand(0.0), ConfigError);
}

TEST_CASE("band monotonicity") {
    const Domain ball = Domain::ball({0.0, 0.0}, 1.0);
    RngStream rng(11, 0);
    Vec lo, hi;
    ball.bounding_box(lo, hi);
    for (int i = 0; i < 2000; ++i) {
        const Vec x = random_point(rng, lo, hi);
        if (in_band(ball, x, BoundaryBand(0.1)))
            CHECK(in_band(ball, x, BoundaryBand(0.3)));
    }
}

TEST_CASE("gradients and hessians") {
    const Domain itv = Domain::interval(0.0, 1.0);
    CHECK(itv.grad_phi({0.25})[0] == 1.0);
    CHECK(itv.grad_phi({0.75})[0] == -1.0);
    CHECK(itv.hess_phi({0.25})(0, 0) == 0.0);
    CHECK_THROWS_AS(itv.grad_phi({0.5}), NonSmoothPointError);
    CHECK_THROWS_AS(itv.grad_phi({1.5}), DomainViolationError);

    const Domain ball = Domain::ball({0.0, 0.0}, 1.0);
    const Vec g = ball.grad_phi({0.5, 0.0});
    CHECK(g[0] == doctest::Approx(-1.0));
    CHECK(g[1] == doctest::Approx(0.0));
    const Mat h = ball.hess_phi({0.5, 0.0});
    CHECK(h(0, 0) == doctest::Approx(0.0));
    CHECK(h(1, 1) == doctest::Approx(-2.0));
    CHECK(h(0, 1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(ball.grad_phi({0.0, 0.0}), NonSmoothPointError);

    const Domain box = Domain::box({0.0, 0.0}, {1.0, 1.0});
    CHECK_THROWS_AS(box.grad_phi({0.5, 0.5}), NonSmoothPointError);
    const Vec gb = box.grad_phi({0.9, 0.5});
    CHECK(gb[0] == -1.0);
    CHECK(gb[1] == 0.0);
}

TEST_CASE("phi is 1-Lipschitz") {
    RngStream rng(7, 0);
    const Domain shapes[] = {Domain::interval(-0.5, 2.0),
                             Domain::box({0.0, -1.0}, {2.0, 1.0}),
                             Domain::ball({0.5, 0.5}, 1.5)};
    for (const Domain& d : shapes) {
        Vec lo, hi;
        d.bounding_box(lo, hi);
        // widen so outside points are exercised too
        Vec wlo = lo, whi = hi;
        for (size_t k = 0; k < lo.size(); ++k) {
            wlo[k] -= 1.0;
            whi[k] += 1.0;
        }
        for (int i = 0; i < 100000; ++i) {
            const Vec x = random_point(rng, wlo, whi);
            const Vec y = random_point(rng, wlo, whi);
            REQUIRE(std::abs(d.phi(x) - d.phi(y)) <= dist2(x, y) + 1e-12);
        }
    }
}

TEST_CASE("unit gradient and finite-difference agreement") {
    RngStream rng(13, 0);
    const Domain shapes[] = {Domain::interval(0.0, 1.0),
                             Domain::box({0.0, 0.0}, {1.0, 2.0}),
                             Domain::ball({0.0, 0.0}, 1.0)};
    const double h = 1e-6;
    for (const Domain& d : shapes) {
        Vec lo, hi;
        d.bounding_box(lo, hi);
        int checked = 0;
        while (checked < 2000) {
            Vec x = random_point(rng, lo, hi);
            if (!d.contains(x) || !d.smooth_at(x, 1e-3) || d.phi(x) < 1e-3) continue;
            ++checked;
            const Vec g = d.grad_phi(x);
            REQUIRE(std::abs(norm2(g) - 1.0) <= 1e-12);
            for (size_t k = 0; k < x.size(); ++k) {
                Vec xp = x, xm = x;
                xp[k] += h;
                xm[k] -= h;
                const double fd = (d.phi(xp) - d.phi(xm)) / (2.0 * h);
                REQUIRE(std::abs(fd - g[k]) <= 1e-5);
            }
        }
    }
}

TEST_CASE("hessian finite-difference agreement on the ball") {
    const Domain ball = Domain::ball({0.2, -0.1}, 1.3);
    RngStream rng(17, 0);
    Vec lo, hi;
    ball.bounding_box(lo, hi);
    const double h = 1e-5;
    int checked = 0;
    while (checked < 500) {
        Vec x = random_point(rng, lo, hi);
        if (!ball.contains(x) || !ball.smooth_at(x, 0.05) || ball.phi(x) < 0.05) continue;
        ++checked;
        const Mat hess = ball.hess_phi(x);
        for (size_t k = 0; k < x.size(); ++k) {
            Vec xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            const Vec gp = ball.grad_phi(xp);
            const Vec gm = ball.grad_phi(xm);
            for (size_t l = 0; l < x.size(); ++l) {
                const double fd = (gp[l] - gm[l]) / (2.0 * h);
                REQUIRE(std::abs(fd - hess(static_cast<int>(l), static_cast<int>(k))) <= 1e-4);
            }
        }
    }
}

TEST_CASE("point_at_distance and sampling") {
    const Domain box = Domain::box({0.0, 0.0}, {1.0, 2.0});
    const Vec p = box.point_at_distance(0.1, 1);  // x0 high face
    CHECK(p[0] == doctest::Approx(0.9));
    CHECK(box.phi(p) == doctest::Approx(0.1));

    const Domain ball = Domain::ball({1.0, 1.0}, 0.5);
    CHECK(ball.phi(ball.point_at_distance(0.2)) == doctest::Approx(0.2));

    RngStream rng(3, 0);
    for (int i = 0; i < 1000; ++i) CHECK(ball.contains(ball.sample_uniform(rng)));
}

TEST_CASE("invalid constructions") {
    CHECK_THROWS_AS(Domain::interval(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(Domain::ball({0.0}, 0.0), ConfigError);
    CHECK_THROWS_AS(Domain::box({0.0, 0.0}, {1.0, 0.0}), ConfigError);
}

}  // TEST_SUITE
