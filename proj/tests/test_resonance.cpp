#include <cmath>
#include <optional>
#include <stdexcept>

#include <doctest.h>

#include "wavekin/core.hpp"
#include "wavekin/resonance.hpp"

using namespace wavekin;

TEST_CASE("triangle factor on reference triangles") {
    // 3-4-5 right triangle: area 6, so S = 12.
    auto s = triangle_factor(3.0, 4.0, 5.0);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(12.0).epsilon(1e-14));

    // Unit equilateral: area sqrt(3)/4.
    s = triangle_factor(1.0, 1.0, 1.0);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));

    // Degenerate (collinear) triads give exactly zero.
    s = triangle_factor(2.0, 1.0, 1.0);
    REQUIRE(s.has_value());
    CHECK(*s == 0.0);

    // Outside the triangle inequality there is no triangle at all.
    CHECK_FALSE(triangle_factor(5.0, 1.0, 1.0).has_value());

    CHECK_THROWS_AS(triangle_factor(0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(triangle_factor(1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("triangle factor is stable for needle triangles") {
    // Heron's formula in its naive form loses all precision here; the
    // sorted, factored evaluation must keep full relative accuracy.
    const double k = 1.0;
    const double eps = 1e-12;
    const double k1 = 0.5 + eps;
    const double k2 = 0.5 + eps;
    const auto s = triangle_factor(k, k1, k2);
    REQUIRE(s.has_value());
    // S = 0.5 * sqrt((k+k1+k2)(k1+k2-k)(k+k1-k2)(k+k2-k1)); here the
    // factors are exactly (2+2eps, 2eps, 1, 1), so S = sqrt(eps(1+eps)).
    const double expected = std::sqrt(eps * (1.0 + eps));
    CHECK(*s == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("angular weight is 2/S off degeneracy and absent on it") {
    const auto s = triangle_factor(1.0, 0.6, 0.7);
    const auto w = angular_weight(1.0, 0.6, 0.7);
    REQUIRE(s.has_value());
    REQUIRE(w.has_value());
    CHECK(*w == doctest::Approx(2.0 / *s).epsilon(1e-14));

    // The angular integral diverges on collinear triads: no finite value.
    CHECK_FALSE(angular_weight(2.0, 1.0, 1.0).has_value());
    CHECK_FALSE(angular_weight(5.0, 1.0, 1.0).has_value());
}

TEST_CASE("triad geometry mirrors the free functions") {
    const auto g = triad_geometry(1.0, 0.6, 0.7);
    REQUIRE(g.has_value());
    CHECK(g->k == 1.0);
    CHECK(g->s == doctest::Approx(*triangle_factor(1.0, 0.6, 0.7)));
    CHECK(g->angular_weight ==
          doctest::Approx(*angular_weight(1.0, 0.6, 0.7)));
    CHECK_FALSE(triad_geometry(5.0, 1.0, 1.0).has_value());
}

TEST_CASE("resonant partner on a power-law dispersion") {
    const WaveSystem toy = toy_system(); // omega = k^{3/2}
    // Split the frequency evenly: omega(k1) = omega(1)/2 at k1 = 2^{-2/3},
    // and the partner must sit at the same wavenumber.
    const double k1 = std::pow(2.0, -2.0 / 3.0);
    const auto p = resonant_partner(toy, 1.0, k1);
    REQUIRE(p.has_value());
    CHECK(p->k2 == doctest::Approx(k1).epsilon(1e-13));
    // Reduction weight 1/omega'(k2) = 2^{1/3}/1.5.
    CHECK(p->jacobian ==
          doctest::Approx(std::pow(2.0, 1.0 / 3.0) / 1.5).epsilon(1e-13));

    // The resonance condition holds at the root.
    const auto q = resonant_partner(toy, 1.0, 0.3);
    REQUIRE(q.has_value());
    CHECK(toy.dispersion(0.3) + toy.dispersion(q->k2) ==
          doctest::Approx(toy.dispersion(1.0)).epsilon(1e-13));

    // No decay partner once omega(k1) >= omega(k).
    CHECK_FALSE(resonant_partner(toy, 1.0, 1.0).has_value());
    CHECK_FALSE(resonant_partner(toy, 1.0, 1.5).has_value());
}

TEST_CASE("root-finding path agrees with the closed form") {
    // The same dispersion presented without power-law metadata forces the
    // bracketed root search; both routes must land on the same partner.
    WaveSystem general = toy_system();
    general.power_law.reset();
    const WaveSystem toy = toy_system();
    for (double k1 : {0.1, 0.35, 0.6, 0.9, 0.99}) {
        const auto a = resonant_partner(general, 1.0, k1);
        const auto b = resonant_partner(toy, 1.0, k1);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(a->k2 == doctest::Approx(b->k2).epsilon(1e-11));
        CHECK(a->jacobian == doctest::Approx(b->jacobian).epsilon(1e-11));
    }
}
