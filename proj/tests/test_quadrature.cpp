#include <cmath>

#include <doctest.h>

#include "wavekin/numeric.hpp"
#include "wavekin/quadrature.hpp"

using namespace wavekin;

TEST_CASE("smooth integrands to near machine precision") {
    QuadratureControls controls;
    auto r = integrate([](double x) { return x * x; }, 0.0, 1.0, controls);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    r = integrate([](double x) { return std::sin(x); }, 0.0,
                  std::acos(-1.0), controls);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.abserr <= 1e-10 * r.value);
}

TEST_CASE("decaying oscillatory integrand") {
    // integral_0^inf e^{-x} cos x = 1/2; truncate where the envelope is
    // below the tolerance.
    QuadratureControls controls;
    const auto r = integrate(
        [](double x) { return std::exp(-x) * std::cos(x); }, 0.0, 40.0,
        controls);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity converges") {
    QuadratureControls controls;
    const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); },
                             0.0, 1.0, controls);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("divergent integrals are rejected, not truncated") {
    QuadratureControls controls;
    controls.limit = 100;
    CHECK_THROWS_AS(
        integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, controls),
        NumericalError);
}

TEST_CASE("subdivision budget failures carry the gsl reason") {
    QuadratureControls controls;
    controls.limit = 1; // a single interval cannot resolve the kink
    try {
        integrate([](double x) { return 1.0 / std::sqrt(std::abs(x)); },
                  -1.0, 1.0, controls);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("adaptive quadrature failed") !=
              std::string::npos);
    }
}

TEST_CASE("roundoff-limited tolerance is not an error") {
    // Requesting 1e-10 relative on a tiny integral whose evaluation noise
    // dominates must still return the best estimate.
    QuadratureControls controls;
    const auto r = integrate(
        [](double x) { return (x - 0.5) * (x - 0.5) * 1e-280; }, 0.0, 1.0,
        controls);
    CHECK(r.value == doctest::Approx(1e-280 / 12.0).epsilon(1e-10));
}
