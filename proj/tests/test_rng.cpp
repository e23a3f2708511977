#include <doctest.h>

#include <cmath>
#include <set>

#include "fvlab/rng.hpp"

using namespace fvlab;

TEST_SUITE("rng") {

// Known-answer vectors for the Philox 4x32-10 block function (Random123
// reference implementation).
TEST_CASE("philox known answers") {
    {
        const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                           {0xffffffffu, 0xffffffffu});
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                           {0xa4093822u, 0x299f31d0u});
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("streams replay exactly after set_step") {
    RngStream a(42, 7);
    a.set_step(123);
    const double u1 = a.uniform01();
    const double n1 = a.normal();
    a.set_step(123);
    CHECK(a.uniform01() == u1);
    CHECK(a.normal() == n1);
}

TEST_CASE("distinct stream ids and steps decorrelate") {
    RngStream a(42, 0), b(42, 1);
    a.set_step(5);
    b.set_step(5);
    CHECK(a.next_u64() != b.next_u64());
    RngStream c(42, 0);
    c.set_step(6);
    RngStream d(42, 0);
    d.set_step(5);
    CHECK(c.next_u64() != d.next_u64());
    CHECK(RngStream(1, 0).next_u64() != RngStream(2, 0).next_u64());
}

TEST_CASE("uniform01 range and normal moments") {
    RngStream rng(2024, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.01);

    double m = 0.0, v = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        m += z;
        v += z * z;
    }
    m /= n;
    v = v / n - m * m;
    CHECK(std::abs(m) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(v - 1.0) < 0.02);
}

TEST_CASE("derive_seed is order sensitive and collision free on a small grid") {
    std::set<uint64_t> seen;
    for (uint64_t a = 0; a < 20; ++a)
        for (uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(99, {a, b}));
    CHECK(seen.size() == 400);
    CHECK(derive_seed(99, {1, 2}) != derive_seed(99, {2, 1}));
}

}  // TEST_SUITE
