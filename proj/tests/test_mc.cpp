#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "wavekin/core.hpp"
#include "wavekin/mc.hpp"
#include "wavekin/rates.hpp"
#include "wavekin/resonance.hpp"

using namespace wavekin;

TEST_CASE("angular oracle reproduces the closed-form triad weight") {
    const double k = 1.0, k1 = 0.6, k2 = 0.7;
    const auto weight = angular_weight(k, k1, k2);
    REQUIRE(weight.has_value());

    const AngularOracleReport rep =
        mc_angular_oracle(k, k1, k2, 200000, 42);
    CHECK(rep.converged);
    CHECK(rep.std_error > 0.0);
    CHECK(std::abs(rep.estimate - *weight) < 4.0 * rep.std_error);
    // The coarse mollifier is an independent estimate of the same number.
    CHECK(std::abs(rep.coarse_estimate - *weight) <
          4.0 * rep.coarse_std_error);
    // The mollifier keeps only an O(1e-3) sliver of draws, so the
    // resolution at this sample count is ~8%; guard against gross
    // variance regressions rather than precision.
    CHECK(rep.std_error < 0.15 * std::abs(*weight));
}

TEST_CASE("angular oracle is deterministic in the seed") {
    const AngularOracleReport a = mc_angular_oracle(1.3, 0.8, 0.9, 50000, 7);
    const AngularOracleReport b = mc_angular_oracle(1.3, 0.8, 0.9, 50000, 7);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.coarse_estimate == b.coarse_estimate);

    const AngularOracleReport c = mc_angular_oracle(1.3, 0.8, 0.9, 50000, 8);
    CHECK(a.estimate != c.estimate);
}

TEST_CASE("angular oracle flags degenerate (collinear) triads") {
    // k = k1 + k2 collapses the triangle; the target integral diverges and
    // the width-halving consistency check must fail rather than return a
    // silently wrong number.
    CHECK(!angular_weight(2.0, 1.0, 1.0).has_value());
    const AngularOracleReport rep = mc_angular_oracle(2.0, 1.0, 1.0, 50000, 3);
    CHECK(!rep.converged);
}

TEST_CASE("brute-force rate oracle brackets the reduced quadrature") {
    const WaveSystem sys = toy_system();
    const SpectrumFn n = [](double k) { return std::exp(-k); };

    // Frozen reduced-quadrature references for gamma(1), eta(1).
    const double gamma_ref = 47.180965028177;
    const double eta_ref = 16.437380822318;

    const McRateReport rep = mc_rate_oracle(sys, n, 1.0, 40.0, 400000, 91);
    CHECK(rep.gamma_std_error > 0.0);
    CHECK(rep.eta_std_error > 0.0);
    CHECK(std::abs(rep.gamma - gamma_ref) < 4.0 * rep.gamma_std_error);
    CHECK(std::abs(rep.eta - eta_ref) < 4.0 * rep.eta_std_error);
    // ~10% resolution at this sample count keeps the bracket meaningful.
    CHECK(rep.gamma_std_error < 0.2 * gamma_ref);
    CHECK(rep.eta_std_error < 0.2 * eta_ref);

    // Same seed, same bytes.
    const McRateReport again = mc_rate_oracle(sys, n, 1.0, 40.0, 400000, 91);
    CHECK(again.gamma == rep.gamma);
    CHECK(again.eta == rep.eta);
}
