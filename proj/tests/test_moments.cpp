#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "wavekin/core.hpp"
#include "wavekin/moments.hpp"

using namespace wavekin;

namespace {

// Two-node bench with hand-picked rates: n_eq = eta / gamma = {1, 2} and
// per-node theta advancing as gamma * t.
struct FrozenBench {
    std::vector<double> grid{1.0, 2.0};
    RateField field;
    IsotropicSpectrum n_eq;

    FrozenBench()
        : field{grid, {1.0, 0.5}, {1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}},
          n_eq(grid, {1.0, 2.0}) {}
};

} // namespace

TEST_CASE("deviation propagator: handbook values and identities") {
    // Binomial solution of dF^(p)/dtheta = p (F^(p-1) - F^(p)).
    SUBCASE("order 3 from a pure second-order start") {
        const std::vector<double> f = exact_deviation_solution({1.0, 0.0}, 0.1);
        REQUIRE(f.size() == 2);
        CHECK(f[0] == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
        CHECK(f[1] == doctest::Approx(0.2337376).epsilon(1e-6));
    }
    SUBCASE("order 2 decays as exp(-2 theta)") {
        const std::vector<double> f = exact_deviation_solution({1.0}, 0.5);
        CHECK(f[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
        CHECK(f[0] == doctest::Approx(0.36788).epsilon(1e-5));
    }
    SUBCASE("theta = 0 is the identity") {
        const std::vector<double> f0 = {0.3, -0.1, 0.7, 0.05};
        const std::vector<double> f = exact_deviation_solution(f0, 0.0);
        for (std::size_t i = 0; i < f0.size(); ++i) CHECK(f[i] == f0[i]);
    }
    SUBCASE("propagation composes as a semigroup") {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(-0.4, 1.0);
        std::vector<double> f0(7);
        for (double& v : f0) v = u(rng);
        const std::vector<double> one_hop = exact_deviation_solution(f0, 0.9);
        const std::vector<double> two_hop =
            exact_deviation_solution(exact_deviation_solution(f0, 0.35), 0.55);
        for (std::size_t i = 0; i < f0.size(); ++i) {
            CHECK(two_hop[i] == doctest::Approx(one_hop[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("polynomial closed form: exact at order 2, asymptotic above") {
    SUBCASE("order 2 coincides with the propagator for any theta") {
        for (double theta : {0.05, 0.3, 1.0, 2.5}) {
            const std::vector<double> poly =
                polynomial_closed_form({0.8}, theta);
            const std::vector<double> exact =
                exact_deviation_solution({0.8}, theta);
            CHECK(poly[0] == doctest::Approx(exact[0]).epsilon(1e-14));
        }
    }
    SUBCASE("order 3 handbook value and its gap to the propagator") {
        const std::vector<double> poly =
            polynomial_closed_form({1.0, 0.0}, 0.1);
        CHECK(poly[1] == doctest::Approx(0.2222455).epsilon(1e-6));
        const std::vector<double> exact =
            exact_deviation_solution({1.0, 0.0}, 0.1);
        const double gap = poly[1] / exact[1] - 1.0;
        CHECK(gap == doctest::Approx(-0.0491668).epsilon(1e-4));
    }
}

TEST_CASE("decay-rate and growth-curve formulas") {
    const PhysicalParams params{72.0, 1.0, 0.1, 13.98};
    const double k = 1.7, t = 0.4;
    const double expected_gamma = kLiteratureDecayConstant *
                                  std::sqrt(params.energy_flux) *
                                  std::pow(72.0, 0.25) * std::pow(k, 0.75);
    CHECK(capillary_decay_rate(params, k, kLiteratureDecayConstant) ==
          doctest::Approx(expected_gamma).epsilon(1e-13));

    const double amp = params.spectrum_amplitude();
    const double expected_xi2 = amp * amp * std::pow(k, -8.5) *
                                (1.0 - std::exp(-2.0 * expected_gamma * t));
    CHECK(xi_growth_curve(params, k, t, kLiteratureDecayConstant) ==
          doctest::Approx(expected_xi2).epsilon(1e-13));
    // At t = 0 nothing has grown yet.
    CHECK(xi_growth_curve(params, k, 0.0, kLiteratureDecayConstant) == 0.0);
}

TEST_CASE("gaussian start on the equilibrium spectrum is a fixed point") {
    const FrozenBench bench;
    const RateProvider provider = RateProvider::frozen(bench.field);
    const MomentHierarchy m0 =
        init_hierarchy(bench.n_eq, 6, InitKind::gaussian);

    HierarchyControls controls;
    controls.checkpoints = {0.5, 1.0, 2.0};
    const HierarchySolution sol = evolve_hierarchy(provider, m0, 2.0, controls);

    REQUIRE(sol.trajectory.size() == 4);
    for (const MomentHierarchy& m : sol.trajectory) {
        for (int p = 1; p <= 6; ++p) {
            for (std::size_t i = 0; i < bench.grid.size(); ++i) {
                CHECK(m.order(p)[i] ==
                      doctest::Approx(m0.order(p)[i]).epsilon(1e-12));
            }
        }
    }
    // Gaussian deviations stay at zero.
    for (const DeviationField& f : sol.deviations) {
        for (int p = 2; p <= 6; ++p) {
            for (double v : f.order(p)) CHECK(std::abs(v) < 1e-12);
        }
    }
}

TEST_CASE("deterministic start: fluctuation growth and renormalized time") {
    const FrozenBench bench;
    const RateProvider provider = RateProvider::frozen(bench.field);
    const MomentHierarchy m0 =
        init_hierarchy(bench.n_eq, 8, InitKind::deterministic);

    HierarchyControls controls;
    controls.ode.rtol = 1e-11;
    controls.checkpoints = {0.25, 0.75, 1.5};
    const HierarchySolution sol =
        evolve_hierarchy(provider, m0, 1.5, controls);

    // theta integrates eta / n along the trajectory; with the mean spectrum
    // pinned at equilibrium that is just gamma * t per node.
    for (std::size_t c = 1; c < sol.times.size(); ++c) {
        for (std::size_t i = 0; i < bench.grid.size(); ++i) {
            CHECK(sol.theta[c][i] ==
                  doctest::Approx(bench.field.gamma[i] * sol.times[c])
                      .epsilon(1e-9));
        }
    }

    // xi^2 = n^2 (1 - e^{-2 gamma t}) from a zero-fluctuation start.
    for (std::size_t c = 0; c < sol.times.size(); ++c) {
        const std::vector<double> s = xi(sol.trajectory[c]);
        for (std::size_t i = 0; i < bench.grid.size(); ++i) {
            const double n = bench.n_eq.values()[i];
            const double predicted =
                n * n *
                (1.0 - std::exp(-2.0 * bench.field.gamma[i] * sol.times[c]));
            CHECK(s[i] * s[i] == doctest::Approx(predicted).epsilon(1e-8));
        }
    }

    // Every deviation order follows the binomial propagator in theta.
    std::vector<double> f0(7);
    double factorial = 1.0;
    for (int p = 2; p <= 8; ++p) {
        factorial *= p;
        f0[static_cast<std::size_t>(p) - 2] = 1.0 / factorial - 1.0;
    }
    for (std::size_t c = 1; c < sol.times.size(); ++c) {
        for (std::size_t i = 0; i < bench.grid.size(); ++i) {
            const std::vector<double> expected =
                exact_deviation_solution(f0, sol.theta[c][i]);
            for (int p = 2; p <= 8; ++p) {
                CHECK(sol.deviations[c].order(p)[i] ==
                      doctest::Approx(expected[static_cast<std::size_t>(p) - 2])
                          .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("deviation bump transports at unit speed in log order") {
    const FrozenBench bench;
    const RateProvider provider = RateProvider::frozen(bench.field);

    const int max_order = 128;
    std::vector<std::vector<double>> f_table(
        static_cast<std::size_t>(max_order) - 1);
    for (int p = 2; p <= max_order; ++p) {
        const double x = std::log(static_cast<double>(p) / 16.0);
        const double bump = 0.1 * std::exp(-x * x / (2.0 * 0.4 * 0.4));
        f_table[static_cast<std::size_t>(p) - 2] = {bump, bump};
    }
    const MomentHierarchy m0 = init_hierarchy(bench.n_eq, max_order, f_table);

    HierarchyControls controls;
    controls.checkpoints = {0.1, 0.2, 0.3, 0.4, 0.5};
    const HierarchySolution sol = evolve_hierarchy(provider, m0, 0.5, controls);

    const TransportReport report = transport_wave_diagnostic(sol, 0);
    REQUIRE(report.theta.size() == sol.times.size());
    CHECK(report.position.front() == doctest::Approx(std::log(16.0)).epsilon(0.02));
    CHECK(report.speed == doctest::Approx(1.0).epsilon(0.1));
    CHECK(!report.truncated);
    // The bump loses height as it spreads over more orders.
    CHECK(report.peak.back() < report.peak.front());
    CHECK(report.peak_decay_per_theta > 0.0);

    // With zero forcing theta never advances and the fits stay zero: the
    // hierarchy only decays in place, so there is no wave to track.
    RateField decay_only = bench.field;
    decay_only.eta = {0.0, 0.0};
    const RateProvider still = RateProvider::frozen(decay_only);
    HierarchyControls short_run;
    short_run.checkpoints = {0.01};
    const HierarchySolution frozen_sol =
        evolve_hierarchy(still, m0, 0.01, short_run);
    const TransportReport flat = transport_wave_diagnostic(frozen_sol, 0);
    CHECK(flat.theta.back() == 0.0);
    CHECK(flat.speed == 0.0);
}

TEST_CASE("hierarchy construction rejects unusable inputs") {
    const FrozenBench bench;

    // Deviations below 1/p! - 1 would make a moment negative.
    std::vector<std::vector<double>> bad = {{-0.9, -0.9}};
    CHECK_THROWS_AS((void)init_hierarchy(bench.n_eq, 2, bad),
                    std::domain_error);

    // Factorials overflow past the order cap.
    CHECK_THROWS_AS(
        (void)init_hierarchy(bench.n_eq, kMaxHierarchyOrder + 1,
                             InitKind::gaussian),
        std::invalid_argument);
    CHECK_THROWS_AS((void)init_hierarchy(bench.n_eq, 0, InitKind::gaussian),
                    std::invalid_argument);

    // Checkpoints must stay inside the integration horizon and be ordered.
    const RateProvider provider = RateProvider::frozen(bench.field);
    const MomentHierarchy m0 =
        init_hierarchy(bench.n_eq, 2, InitKind::gaussian);
    HierarchyControls controls;
    controls.checkpoints = {0.5, 1.5};
    CHECK_THROWS_AS((void)evolve_hierarchy(provider, m0, 1.0, controls),
                    std::invalid_argument);
    controls.checkpoints = {0.75, 0.5};
    CHECK_THROWS_AS((void)evolve_hierarchy(provider, m0, 1.0, controls),
                    std::invalid_argument);
}

TEST_CASE("amplitude-distribution probes") {
    const PdfProbe probe = pdf_probe(0.5, 6);
    CHECK(probe.lambda == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(probe.width == doctest::Approx(0.5).epsilon(1e-14));

    // Rayleigh reference: exp(-lambda/n)/n, normalized over lambda.
    const double n = 0.7;
    CHECK(rayleigh_reference_density(n, 0.0) ==
          doctest::Approx(1.0 / n).epsilon(1e-14));
    CHECK(rayleigh_reference_density(n, 1.4) ==
          doctest::Approx(std::exp(-2.0) / n).epsilon(1e-14));
    // Coarse trapezoid over a long window integrates to about one.
    double mass = 0.0;
    const double h = 0.01;
    for (int i = 0; i < 4000; ++i) {
        const double a = rayleigh_reference_density(n, h * i);
        const double b = rayleigh_reference_density(n, h * (i + 1));
        mass += 0.5 * (a + b) * h;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
}
