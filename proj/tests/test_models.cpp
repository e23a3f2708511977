#include <doctest.h>

#include <cmath>

#include "fvlab/errors.hpp"
#include "fvlab/hypothesis.hpp"
#include "fvlab/model.hpp"

using namespace fvlab;

TEST_SUITE("models") {

TEST_CASE("bm coefficients") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "bm";
    const auto m = make_model(spec, d);
    const Coefficients c = eval_coefficients(*m, 0.3, {}, {0.5});
    CHECK(c.sigma(0, 0) == 1.0);
    CHECK(c.eta[0] == 0.0);
    CHECK(c.kappa == 0.0);
    CHECK(m->env_dim() == 0);
    CHECK_THROWS_AS(eval_coefficients(*m, 0.0, {}, {1.5}), DomainViolationError);
}

TEST_CASE("bm_drift constant drift") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0});
    ModelSpec spec;
    spec.name = "bm_drift";
    spec.drift = {0.3, -0.2};
    const auto m = make_model(spec, d);
    const Coefficients c = eval_coefficients(*m, 1.0, {}, {0.5, 0.5});
    CHECK(c.eta[0] == 0.3);
    CHECK(c.eta[1] == -0.2);
}

TEST_CASE("bm_sin_drift is time dependent") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "bm_sin_drift";
    spec.drift = {2.0};
    spec.omega = 3.0;
    const auto m = make_model(spec, d);
    CHECK(eval_coefficients(*m, 0.0, {}, {0.5}).eta[0] == doctest::Approx(0.0));
    CHECK(eval_coefficients(*m, 0.5, {}, {0.5}).eta[0] ==
          doctest::Approx(2.0 * std::sin(1.5)));
}

TEST_CASE("ou_env zero environment gives zero drift") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "ou_env";
    spec.env_coupling = {0.7};
    spec.theta = 1.5;
    const auto m = make_model(spec, d);
    CHECK(m->env_dim() == 1);
    const Coefficients c0 = eval_coefficients(*m, 0.0, {0.0}, {0.5});
    CHECK(c0.eta[0] == 0.0);
    CHECK(c0.m[0] == 0.0);
    const Coefficients c1 = eval_coefficients(*m, 0.0, {2.0}, {0.5});
    CHECK(c1.eta[0] == doctest::Approx(1.4));
    CHECK(c1.m[0] == doctest::Approx(-3.0));
}

TEST_CASE("fg decomposition identities") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec bm;
    bm.name = "bm";
    const auto m1 = make_model(bm, d);
    const FgSplit s1 = fg_decomposition(*m1, d, 0.0, {}, {0.25});
    CHECK(s1.f == doctest::Approx(1.0));
    CHECK(s1.g == 0.0);

    ModelSpec scaled = bm;
    scaled.sigma = 3.0;
    const auto m2 = make_model(scaled, d);
    const FgSplit s2 = fg_decomposition(*m2, d, 0.0, {}, {0.25});
    CHECK(s2.f == doctest::Approx(9.0));
    CHECK(s2.g == 0.0);

    ModelSpec phis;
    phis.name = "bm_phi_sigma";
    phis.bounds.k_g = 3.0;
    const auto m3 = make_model(phis, d);
    const FgSplit s3 = fg_decomposition(*m3, d, 0.0, {}, {0.2});
    CHECK(s3.f == doctest::Approx(1.0));
    CHECK(s3.g == doctest::Approx(2.0 * 0.2 + 0.2 * 0.2));
    // |g| <= 3 phi on phi < 1
    CHECK(std::abs(s3.g) <= 3.0 * 0.2 + 1e-12);

    CHECK_THROWS_AS(fg_decomposition(*m1, d, 0.0, {}, {0.5}), NonSmoothPointError);
}

TEST_CASE("fg sum identity at random smooth points") {
    const Domain d = Domain::ball({0.0, 0.0}, 1.0);
    ModelSpec phis;
    phis.name = "bm_phi_sigma";
    phis.bounds.k_g = 3.0;
    const auto m = make_model(phis, d);
    RngStream rng(5, 0);
    int checked = 0;
    while (checked < 1000) {
        Vec x = {2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
        if (!d.contains(x) || !d.smooth_at(x, 1e-6)) continue;
        ++checked;
        const FgSplit s = m->fg(0.0, {}, x);
        const Vec g = d.grad_phi(x);
        Coefficients c;
        m->init_coefficients(c);
        m->eval(0.0, {}, x, c);
        REQUIRE(std::abs(s.f + s.g - quadratic_form_mmt(c.sigma, g)) <= 1e-10);
    }
}

TEST_CASE("validator passes a well-declared bm") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "bm";
    spec.bounds = {0.1, 2.0, 0.5, 2.0, 1.0};
    const auto m = make_model(spec, d);
    const HypothesisReport rep = validate_dynamics_hypothesis(*m, d, 500, 42);
    CHECK(rep.all_pass);
    CHECK(rep.nonsmooth_fraction == 0.0);
    CHECK(rep.find("f_range") != nullptr);
    CHECK(rep.find("f_range")->pass);
}

TEST_CASE("validator flags a misdeclared c0") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "bm";
    spec.bounds = {0.1, 2.0, 1.5, 2.0, 1.0};
    const auto m = make_model(spec, d);
    const HypothesisReport rep = validate_dynamics_hypothesis(*m, d, 500, 42);
    CHECK_FALSE(rep.all_pass);
    const ClauseResult* f_range = rep.find("f_range");
    REQUIRE(f_range != nullptr);
    CHECK_FALSE(f_range->pass);
    // witness: f = 1 < c0 = 1.5 at some sampled band point
    CHECK(f_range->worst_value == doctest::Approx(1.0));
    CHECK(d.contains(f_range->worst.x));
}

TEST_CASE("validator flags k_g = 0 with a phi-dependent sigma") {
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "bm_phi_sigma";
    spec.bounds = {0.1, 3.0, 0.5, 2.0, 0.0};
    const auto m = make_model(spec, d);
    const HypothesisReport rep = validate_dynamics_hypothesis(*m, d, 500, 42);
    CHECK_FALSE(rep.all_pass);
    REQUIRE(rep.find("g_linear_bound") != nullptr);
    CHECK_FALSE(rep.find("g_linear_bound")->pass);
}

TEST_CASE("validator reports the nonsmooth fraction on a box") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0});
    ModelSpec spec;
    spec.name = "bm";
    spec.bounds.a0 = 0.4;  // wide band so the diagonal ridge is sampled
    const auto m = make_model(spec, d);
    const HypothesisReport rep = validate_dynamics_hypothesis(*m, d, 20000, 42);
    CHECK(rep.all_pass);
    CHECK(rep.nonsmooth_fraction > 0.0);
    CHECK(rep.nonsmooth_fraction < 0.05);
}

TEST_CASE("bad declarations are rejected") {
    HypothesisConstants b;
    b.c0 = 2.0;
    b.C0 = 1.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    const Domain d = Domain::interval(0.0, 1.0);
    ModelSpec spec;
    spec.name = "no_such_model";
    CHECK_THROWS_AS(make_model(spec, d), ConfigError);
}

}  // TEST_SUITE
