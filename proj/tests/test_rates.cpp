#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wavekin/core.hpp"
#include "wavekin/numeric.hpp"
#include "wavekin/rates.hpp"

using namespace wavekin;

namespace {

SpectrumFn exponential_spectrum() {
    return [](double k) { return std::exp(-k); };
}

} // namespace

TEST_CASE("decay and forcing rates on the toy system match frozen references") {
    // Reference values were produced by an independent 2D Monte Carlo
    // evaluation of the resonant-manifold integrals and agree with the
    // reduced quadrature to all printed digits.
    const WaveSystem sys = toy_system();
    const SpectrumFn n = exponential_spectrum();

    struct Row {
        double k, gamma, eta;
    };
    const std::vector<Row> table = {
        {0.5, 40.975407316680, 31.765691390452},
        {1.0, 47.180965028177, 16.437380822318},
        {2.0, 45.464081988998, 5.583078096988},
    };

    for (const auto& row : table) {
        const RateSample s = rates_at(sys, n, row.k);
        CHECK(s.gamma == doctest::Approx(row.gamma).epsilon(1e-9));
        CHECK(s.eta == doctest::Approx(row.eta).epsilon(1e-9));
        CHECK(s.gamma_err < 1e-8);
        CHECK(s.eta_err < 1e-8);
        CHECK(s.eta > 0.0);
    }
}

TEST_CASE("rates decompose into the branch integrals with the right weights") {
    // gamma carries n(k2) on the decay branch and n(k1) - n(k2) on the
    // growth branch with an 8*pi*eps^2 prefactor; eta carries n1*n2 and
    // 2*n1*n2 with 4*pi*eps^2. Rebuild both from the shared reduced
    // integrals and compare against the packaged evaluation.
    const WaveSystem sys = toy_system();
    const SpectrumFn n = exponential_spectrum();
    const double k = 1.0;
    const double eps2 = sys.vertex_prefactor * sys.vertex_prefactor;

    const ManifoldIntegrals gamma_parts = reduced_manifold_integrals(
        sys, k,
        [&](double, double k2) { return n(k2); },
        [&](double k1, double k2) { return n(k1) - n(k2); });
    const ManifoldIntegrals eta_parts = reduced_manifold_integrals(
        sys, k,
        [&](double k1, double k2) { return n(k1) * n(k2); },
        [&](double k1, double k2) { return 2.0 * n(k1) * n(k2); });

    const double gamma_built =
        8.0 * M_PI * eps2 * (gamma_parts.decay + gamma_parts.growth);
    const double eta_built =
        4.0 * M_PI * eps2 * (eta_parts.decay + eta_parts.growth);

    const RateSample s = rates_at(sys, n, k);
    CHECK(gamma_built == doctest::Approx(s.gamma).epsilon(1e-12));
    CHECK(eta_built == doctest::Approx(s.eta).epsilon(1e-12));
}

TEST_CASE("callable and gridded spectra give matching rates on a power law") {
    // The gridded route interpolates log-log, which is exact for a pure
    // power law, so the two overloads must agree to quadrature accuracy.
    const WaveSystem sys = capillary_system(72.0, 1.0);
    const PhysicalParams params{72.0, 1.0, 0.1, 1.0e-3};
    const std::vector<double> grid = geometric_grid(0.25, 4.0, 17);
    const IsotropicSpectrum gridded = zf_spectrum(params, grid);
    const double amp = params.spectrum_amplitude();
    const SpectrumFn analytic = [amp](double k) {
        return amp * std::pow(k, -17.0 / 4.0);
    };

    for (double k : {0.5, 1.0, 2.0}) {
        const RateSample a = rates_at(sys, analytic, k);
        const RateSample b = rates_at(sys, gridded, k);
        CHECK(a.gamma == doctest::Approx(b.gamma).epsilon(1e-8));
        CHECK(a.eta == doctest::Approx(b.eta).epsilon(1e-8));
    }
}

TEST_CASE("scalar helpers agree with the combined sample") {
    const WaveSystem sys = capillary_system(72.0, 1.0);
    const PhysicalParams params{72.0, 1.0, 0.1, 1.0e-3};
    const std::vector<double> grid = geometric_grid(0.25, 4.0, 17);
    const IsotropicSpectrum spec = zf_spectrum(params, grid);

    const RateSample s = rates_at(sys, spec, 1.0);
    CHECK(gamma(sys, spec, 1.0) == doctest::Approx(s.gamma).epsilon(1e-13));
    CHECK(eta(sys, spec, 1.0) == doctest::Approx(s.eta).epsilon(1e-13));
}

TEST_CASE("rate field matches per-node evaluation and is thread invariant") {
    const WaveSystem sys = capillary_system(72.0, 1.0);
    const PhysicalParams params{72.0, 1.0, 0.1, 1.0e-3};
    const std::vector<double> grid = geometric_grid(0.5, 2.0, 7);
    const IsotropicSpectrum spec = zf_spectrum(params, grid);

    const RateField field1 = rate_field(sys, spec, grid, {}, 1);
    const RateField field3 = rate_field(sys, spec, grid, {}, 3);
    REQUIRE(field1.gamma.size() == grid.size());

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const RateSample s = rates_at(sys, spec, grid[i]);
        CHECK(field1.gamma[i] == s.gamma);
        CHECK(field1.eta[i] == s.eta);
        // Thread partitioning must never change the computed bytes.
        CHECK(field3.gamma[i] == field1.gamma[i]);
        CHECK(field3.eta[i] == field1.eta[i]);
    }
}

TEST_CASE("dimensionless decay constant of the stationary spectrum") {
    const WaveSystem sys = capillary_system(72.0, 1.0);
    const RateConstantReport report = dimensionless_rate_constant(sys);
    CHECK(report.value == doctest::Approx(4.300000000008).epsilon(1e-10));
    CHECK(report.rel_error < 1e-12);

    // The constant is a property of the scale-invariant family, not of the
    // material parameters: a different fluid gives the same number.
    const RateConstantReport other =
        dimensionless_rate_constant(capillary_system(0.07, 1000.0));
    CHECK(other.value == report.value);
}

TEST_CASE("degenerate inputs are rejected") {
    const WaveSystem sys = toy_system();
    const SpectrumFn n = exponential_spectrum();

    CHECK_THROWS_AS((void)rates_at(sys, n, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)rates_at(sys, n, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(
        (void)reduced_manifold_integrals(
            sys, 0.0, [](double, double) { return 1.0; },
            [](double, double) { return 1.0; }),
        std::invalid_argument);

    // Exponent 1 collapses the resonant manifold onto collinear triads.
    CHECK_THROWS_AS((void)rates_at(linear_dispersion_system(), n, 1.0),
                    std::invalid_argument);

    // A system without power-law metadata cannot use the reduction at all.
    WaveSystem opaque = toy_system();
    opaque.power_law.reset();
    CHECK_THROWS_AS((void)rates_at(opaque, n, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)dimensionless_rate_constant(opaque),
                    std::domain_error);
}

TEST_CASE("non-integrable spectra surface as quadrature failures") {
    // On the unit-vertex toy system a pure power law k^x only gives finite
    // rates for x in (-1, -3/4); outside that window the corner or tail
    // integral diverges and the adaptive quadrature must report it rather
    // than return a number.
    const WaveSystem sys = toy_system();
    const SpectrumFn heavy = [](double k) { return std::pow(k, -2.5); };
    CHECK_THROWS_AS((void)rates_at(sys, heavy, 1.0), NumericalError);
}
