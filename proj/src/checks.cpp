#include "wavekin/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wavekin/mc.hpp"
#include "wavekin/rates.hpp"
#include "wavekin/resonance.hpp"

namespace wavekin {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = static_cast<double>(n) * sxx - sx * sx;
    if (!(det > 0.0)) {
        throw std::invalid_argument("slope fit needs spread in x");
    }
    return (static_cast<double>(n) * sxy - sx * sy) / det;
}

// Slope of a zero-intercept model y = s x.
double fit_slope_through_origin(const std::vector<double>& x,
                                const std::vector<double>& y) {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("slope fit needs nonzero x");
    }
    return sxy / sxx;
}

constexpr double kLiteratureConstant = 4.30;    // dimensionless decay constant
constexpr double kLiteraturePrefactor = 1.20;   // rounded decay prefactor

// Shared stationary-spectrum test bench: unit material constants and unit
// flux, five-node grid spanning [0.5, 2].
struct StationaryBench {
    PhysicalParams params;
    WaveSystem system;
    std::vector<double> grid;
    IsotropicSpectrum n0;
    RateField field;
    RateProvider provider;

    explicit StationaryBench(const QuadratureControls& quadrature,
                             std::vector<double> g = geometric_grid(0.5, 2.0,
                                                                    5))
        : system(capillary_system(1.0, 1.0)),
          grid(std::move(g)),
          n0(zf_spectrum(params, grid)),
          field(rate_field(system, n0, grid, quadrature)),
          provider(RateProvider::frozen_stationary(field, n0)) {}
};

} // namespace

ToleranceProfile ToleranceProfile::fast() {
    ToleranceProfile p;
    p.name = "fast";
    p.quadrature.epsrel = 1e-8;
    p.ode_rtol = 1e-10;
    // The 3-sigma oracle gate needs enough samples for its variance
    // estimates to stabilize; below ~4e5 the worst-of-50 z draw gets
    // fat-tailed and seed-sensitive.
    p.oracle_samples = 400000;
    p.oracle_triads = 50;
    p.rate_oracle_samples = 200000;
    p.rj_triads = 2000;
    return p;
}

ToleranceProfile ToleranceProfile::strict() {
    ToleranceProfile p;
    p.name = "strict";
    p.quadrature.epsrel = 1e-10;
    p.ode_rtol = 1e-12;
    p.oracle_samples = 1000000;
    p.oracle_triads = 50;
    p.rate_oracle_samples = 1000000;
    p.rj_triads = 10000;
    return p;
}

ToleranceProfile ToleranceProfile::by_name(const std::string& name) {
    if (name == "fast") return fast();
    if (name == "strict") return strict();
    throw std::invalid_argument("unknown tolerance profile: " + name);
}

ConstantsReport run_constants(const ToleranceProfile& profile,
                              std::uint64_t seed) {
    ConstantsReport report;
    const WaveSystem system = capillary_system(1.0, 1.0);
    const RateConstantReport rc =
        dimensionless_rate_constant(system, profile.quadrature);
    report.constant = rc.value;
    report.constant_rel_error = rc.rel_error;

    PhysicalParams params;
    report.decay_prefactor =
        rc.value * params.kz_constant / (16.0 * std::numbers::pi);

    // Normalization cross-check: the full rate quadrature on the stationary
    // spectrum must reproduce decay_prefactor * sqrt(P) sigma^{1/4} k^{3/4}.
    const std::vector<double> grid = geometric_grid(0.5, 2.0, 5);
    const IsotropicSpectrum n0 = zf_spectrum(params, grid);
    const double k_ref = grid[2]; // the middle node, k = 1
    const RateSample full =
        rates_at(system, n0, k_ref, profile.quadrature);
    const double formula =
        capillary_decay_rate(params, k_ref, report.decay_prefactor);
    report.normalization_discrepancy = std::abs(full.gamma / formula - 1.0);

    // Brute-force Monte-Carlo verdict on the same engine and vertex. The
    // stationary power law is too heavy-tailed near the k2 -> 0 corner for
    // naive sampling, so the verdict runs on a smooth exponential spectrum,
    // which exercises every reduction constant it needs to certify.
    const SpectrumFn smooth = [](double k) { return std::exp(-k); };
    const RateSample quad_smooth =
        rates_at(system, smooth, 1.0, profile.quadrature);
    const McRateReport mc = mc_rate_oracle(
        system, smooth, 1.0, 40.0, profile.rate_oracle_samples, seed);
    report.mc_z_gamma = (mc.gamma - quad_smooth.gamma) / mc.gamma_std_error;
    report.mc_z_eta = (mc.eta - quad_smooth.eta) / mc.eta_std_error;
    const bool mc_ok =
        std::abs(report.mc_z_gamma) <= 3.0 && std::abs(report.mc_z_eta) <= 3.0;
    report.mc_verdict = mc_ok
                            ? "quadrature consistent with Monte-Carlo (3 sigma)"
                            : "quadrature DISCREPANT with Monte-Carlo";

    const double rel = std::abs(report.constant - kLiteratureConstant) /
                       kLiteratureConstant;
    CheckResult check;
    check.name = "capillary-constant";
    check.passed = rel <= 0.05 && mc_ok;
    check.detail = "dimensionless decay constant " + fmt(report.constant) +
                   " (quadrature error " + fmt(rc.rel_error) +
                   ") vs literature 4.30, off by " + fmt(100.0 * rel) +
                   "%; normalization discrepancy " +
                   fmt(report.normalization_discrepancy) + "; " +
                   report.mc_verdict + " [z_gamma=" + fmt(report.mc_z_gamma) +
                   ", z_eta=" + fmt(report.mc_z_eta) + "]";
    check.measured = {{"constant", report.constant},
                      {"quadrature_rel_error", rc.rel_error},
                      {"literature", kLiteratureConstant},
                      {"relative_offset", rel},
                      {"normalization_discrepancy",
                       report.normalization_discrepancy},
                      {"mc_z_gamma", report.mc_z_gamma},
                      {"mc_z_eta", report.mc_z_eta},
                      {"mc_verdict", report.mc_verdict}};
    report.checks.push_back(std::move(check));
    return report;
}

CheckResult check_prefactor_identity(const ToleranceProfile& profile) {
    const WaveSystem system = capillary_system(1.0, 1.0);
    const RateConstantReport rc =
        dimensionless_rate_constant(system, profile.quadrature);
    PhysicalParams params;
    const double prefactor =
        rc.value * params.kz_constant / (16.0 * std::numbers::pi);
    const double gap = std::abs(prefactor / kLiteraturePrefactor - 1.0);

    CheckResult check;
    check.name = "prefactor-identity";
    check.passed = std::abs(prefactor - 1.196) <= 5e-4 && gap <= 0.005;
    check.detail = "decay prefactor I*C/16pi = " + fmt(prefactor) +
                   " (expected 1.196); distance from rounded literature "
                   "1.20 is " +
                   fmt(100.0 * gap) + "% (budget 0.5%)";
    check.measured = {{"prefactor", prefactor},
                      {"expected", 1.196},
                      {"literature", kLiteraturePrefactor},
                      {"literature_gap", gap}};
    return check;
}

CheckResult check_zf_stationarity(const ToleranceProfile& profile) {
    PhysicalParams params;
    const WaveSystem system = capillary_system(1.0, 1.0);
    const std::vector<double> grid = geometric_grid(0.5, 50.0, 36);
    const IsotropicSpectrum n0 = zf_spectrum(params, grid);
    const RateField field = rate_field(system, n0, grid, profile.quadrature);

    double worst_defect = 0.0;
    std::vector<double> log_k(grid.size()), log_gamma(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double gn = field.gamma[i] * n0.values()[i];
        worst_defect =
            std::max(worst_defect, std::abs(field.eta[i] - gn) / gn);
        log_k[i] = std::log(grid[i]);
        log_gamma[i] = std::log(field.gamma[i]);
    }
    const double slope = fit_slope(log_k, log_gamma);

    CheckResult check;
    check.name = "zf-stationarity";
    check.passed = worst_defect < 0.05 && std::abs(slope - 0.75) <= 0.01;
    check.detail = "stationary defect max |eta - gamma n|/(gamma n) = " +
                   fmt(worst_defect) + " over " +
                   std::to_string(grid.size()) +
                   " nodes spanning 2 decades; gamma log-log slope = " +
                   fmt(slope) + " (expected 0.75 +- 0.01)";
    check.measured = {{"max_defect", worst_defect},
                      {"gamma_slope", slope},
                      {"nodes", grid.size()},
                      {"k_min", grid.front()},
                      {"k_max", grid.back()}};
    return check;
}

namespace {

// Shared sampler for the angular-weight cross-check: draws non-degenerate
// triads with a 15% margin from the collinear boundaries, compares the
// analytic weight to the Monte-Carlo oracle, and optionally records every
// triad row.
void angular_scan(const ToleranceProfile& profile, std::uint64_t seed,
                  CsvTable* table, double& worst_z, std::size_t& converged) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    worst_z = 0.0;
    converged = 0;
    for (std::size_t t = 0; t < profile.oracle_triads; ++t) {
        const double k = std::exp(std::log(0.5) +
                                  unit(rng) * std::log(5.0 / 0.5));
        const double k1 = k * (0.25 + 0.65 * unit(rng));
        const double lo = k - k1;
        const double hi = k + k1;
        const double k2 = lo + (0.15 + 0.70 * unit(rng)) * (hi - lo);
        const auto analytic = angular_weight(k, k1, k2);
        if (!analytic) {
            throw std::logic_error("sampled triad left the triangle domain");
        }
        const AngularOracleReport rep =
            mc_angular_oracle(k, k1, k2, profile.oracle_samples, rng());
        if (rep.converged) ++converged;
        const double z = (rep.estimate - *analytic) / rep.std_error;
        if (std::abs(z) > std::abs(worst_z)) worst_z = z;
        if (table) {
            table->rows.push_back(
                {k, k1, k2, *analytic, rep.estimate, rep.std_error, z});
        }
    }
}

} // namespace

CheckResult check_angular_oracle(const ToleranceProfile& profile,
                                 std::uint64_t seed) {
    double worst_z = 0.0;
    std::size_t converged = 0;
    const std::size_t triads = profile.oracle_triads;
    angular_scan(profile, seed, nullptr, worst_z, converged);

    CheckResult check;
    check.name = "angular-oracle";
    check.passed = std::abs(worst_z) <= 3.0 && converged == triads;
    check.detail = "analytic angular weight vs Monte-Carlo on " +
                   std::to_string(triads) + " random triads, " +
                   std::to_string(profile.oracle_samples) +
                   " samples each: worst z = " + fmt(worst_z) + ", " +
                   std::to_string(converged) + "/" + std::to_string(triads) +
                   " width-halvings converged";
    check.measured = {{"triads", triads},
                      {"samples", profile.oracle_samples},
                      {"worst_z", worst_z},
                      {"converged", converged}};
    return check;
}

CheckResult check_rayleigh_jeans_null(const ToleranceProfile& profile,
                                      std::uint64_t seed) {
    const WaveSystem system = capillary_system(1.0, 1.0);
    const auto& omega = system.dispersion;
    const double temperature = 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t triads = profile.rj_triads;
    double worst = 0.0;
    for (std::size_t t = 0; t < triads; ++t) {
        const double k =
            std::exp(std::log(0.1) + unit(rng) * std::log(100.0 / 0.1));
        if (t % 2 == 0) {
            // Decay branch: omega(k) = omega(k1) + omega(k2). Draw the
            // frequency fraction uniformly and solve for the partner.
            const double u = 0.02 + 0.96 * unit(rng);
            const double k1 = k * std::pow(u, 2.0 / 3.0);
            const auto partner = resonant_partner(system, k, k1);
            if (!partner) {
                throw std::logic_error("resonant partner must exist");
            }
            const double nk = temperature / omega(k);
            const double n1 = temperature / omega(k1);
            const double n2 = temperature / omega(partner->k2);
            const double comb = n1 * n2 - nk * (n1 + n2);
            const double scale = n1 * n2 + nk * (n1 + n2);
            worst = std::max(worst, std::abs(comb) / scale);
        } else {
            // Growth branch: omega(k2) = omega(k) + omega(k1); with a
            // power-law dispersion the partner is explicit.
            const double k1 = k * std::exp(-2.0 + 4.0 * unit(rng));
            const double k2 =
                std::pow(omega(k) + omega(k1), 2.0 / 3.0);
            const double nk = temperature / omega(k);
            const double n1 = temperature / omega(k1);
            const double n2 = temperature / omega(k2);
            const double comb = nk * n1 - n2 * (nk + n1);
            const double scale = nk * n1 + n2 * (nk + n1);
            worst = std::max(worst, std::abs(comb) / scale);
        }
    }

    CheckResult check;
    check.name = "rayleigh-jeans-null";
    check.passed = worst < 1e-12;
    check.detail = "equipartition kernel combination on " +
                   std::to_string(triads) +
                   " resonant triads (both branches): worst relative "
                   "residual " +
                   fmt(worst) + " (budget 1e-12)";
    check.measured = {{"triads", triads}, {"worst_residual", worst}};
    return check;
}

CheckResult check_gaussian_fixed_point(const ToleranceProfile& profile) {
    const StationaryBench bench(profile.quadrature);
    const int max_order = 8;
    const MomentHierarchy start =
        init_hierarchy(bench.n0, max_order, InitKind::gaussian);

    HierarchyControls controls;
    controls.ode.rtol = profile.ode_rtol;
    const double t_end = 5.0 / bench.field.gamma.front();
    for (int j = 1; j <= 5; ++j) {
        controls.checkpoints.push_back(t_end * (j / 5.0));
    }
    const HierarchySolution sol =
        evolve_hierarchy(bench.provider, start, t_end, controls);

    double drift = 0.0;
    double theta_reached = 0.0;
    for (std::size_t c = 1; c < sol.deviations.size(); ++c) {
        for (int p = 2; p <= max_order; ++p) {
            for (double f : sol.deviations[c].order(p)) {
                drift = std::max(drift, std::abs(f));
            }
        }
        for (double th : sol.theta[c]) {
            theta_reached = std::max(theta_reached, th);
        }
    }

    CheckResult check;
    check.name = "gaussian-fixed-point";
    check.passed = drift < 1e-6;
    check.detail = "Gaussian hierarchy (P = 8) under frozen stationary "
                   "rates: worst relative moment drift " +
                   fmt(drift) + " through theta = " + fmt(theta_reached) +
                   " (budget 1e-6 over theta in [0,5])";
    check.measured = {{"max_order", max_order},
                      {"drift", drift},
                      {"theta_reached", theta_reached}};
    return check;
}

CheckResult check_deviation_dynamics(const ToleranceProfile& profile) {
    const StationaryBench bench(profile.quadrature);
    const int max_order = 10;
    std::vector<std::vector<double>> f_table(
        max_order - 1, std::vector<double>(bench.grid.size(), 0.0));
    f_table[0].assign(bench.grid.size(), 1.0);
    const MomentHierarchy start =
        init_hierarchy(bench.n0, max_order, f_table);

    HierarchyControls controls;
    controls.ode.rtol = profile.ode_rtol;
    // Cap the clock at theta = 3 on the fastest node: beyond that the
    // deviations decay to where a relative comparison only measures the
    // integrator's error floor, not the dynamics.
    const double t_end = 3.0 / bench.field.gamma.back();
    for (int j = 1; j <= 6; ++j) {
        controls.checkpoints.push_back(t_end * (j / 6.0));
    }
    const HierarchySolution sol =
        evolve_hierarchy(bench.provider, start, t_end, controls);

    std::vector<double> f0(static_cast<std::size_t>(max_order) - 1, 0.0);
    f0[0] = 1.0;
    double worst = 0.0;
    double worst_f2 = 0.0;
    for (std::size_t c = 1; c < sol.deviations.size(); ++c) {
        for (std::size_t i = 0; i < bench.grid.size(); ++i) {
            const double theta = sol.theta[c][i];
            const std::vector<double> exact =
                exact_deviation_solution(f0, theta);
            for (int p = 2; p <= max_order; ++p) {
                const double num = sol.deviations[c].order(p)[i];
                const double ref = exact[static_cast<std::size_t>(p) - 2];
                worst = std::max(worst, std::abs(num - ref) / std::abs(ref));
            }
            const double law = std::exp(-2.0 * theta);
            worst_f2 = std::max(
                worst_f2,
                std::abs(sol.deviations[c].order(2)[i] - law) / law);
        }
    }

    CheckResult check;
    check.name = "deviation-dynamics";
    check.passed = worst <= 1e-8 && worst_f2 <= 1e-8;
    check.detail = "hierarchy integration vs exact deviation solution "
                   "(P = 10): worst relative error " +
                   fmt(worst) + "; F(2) vs e^{-2 theta}: worst " +
                   fmt(worst_f2) + " (budgets 1e-8)";
    check.measured = {{"max_order", max_order},
                      {"worst_rel_error", worst},
                      {"worst_f2_rel_error", worst_f2}};
    return check;
}

CheckResult check_closed_form_audit(const ToleranceProfile& profile) {
    // p = 2: the two routes are the same expression.
    double p2_gap = 0.0;
    for (double theta : {0.1, 0.5, 1.0, 2.0}) {
        const std::vector<double> f0 = {1.0};
        const double ex = exact_deviation_solution(f0, theta)[0];
        const double poly = polynomial_closed_form(f0, theta)[0];
        p2_gap = std::max(p2_gap, std::abs(ex - poly) / std::abs(ex));
    }

    // p = 3..6: the remainder must scale as theta^2 (ratio ~4 when theta
    // doubles), which is exactly "agreement to first order". The theta^2
    // term at order p is fed by the order p-1 start value, so the probe
    // needs every entry nonzero.
    const std::vector<double> f0_long = {1.0, 0.7, 0.4, 0.2, 0.1};
    const double ta = 1e-3, tb = 2e-3;
    const std::vector<double> ex_a = exact_deviation_solution(f0_long, ta);
    const std::vector<double> ex_b = exact_deviation_solution(f0_long, tb);
    const std::vector<double> po_a = polynomial_closed_form(f0_long, ta);
    const std::vector<double> po_b = polynomial_closed_form(f0_long, tb);
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (std::size_t idx = 1; idx <= 4; ++idx) { // p = 3..6
        const double ra = std::abs(ex_a[idx] - po_a[idx]);
        const double rb = std::abs(ex_b[idx] - po_b[idx]);
        if (!(ra > 0.0)) {
            ratio_lo = 0.0;
            continue;
        }
        const double ratio = rb / ra;
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
    }

    // Finite-theta gap at p = 3, theta = 0.1, by the analytic route and by
    // direct hierarchy integration.
    const std::vector<double> f0_p3 = {1.0, 0.0};
    const double theta_probe = 0.1;
    const double ex_p3 = exact_deviation_solution(f0_p3, theta_probe)[1];
    const double po_p3 = polynomial_closed_form(f0_p3, theta_probe)[1];
    const double gap_analytic = (po_p3 - ex_p3) / ex_p3;

    const StationaryBench bench(profile.quadrature);
    std::vector<std::vector<double>> f_table(
        2, std::vector<double>(bench.grid.size(), 0.0));
    f_table[0].assign(bench.grid.size(), 1.0);
    const MomentHierarchy start = init_hierarchy(bench.n0, 3, f_table);
    HierarchyControls controls;
    controls.ode.rtol = profile.ode_rtol;
    const double t_end = theta_probe / bench.field.gamma.front();
    const HierarchySolution sol =
        evolve_hierarchy(bench.provider, start, t_end, controls);
    const double theta_num = sol.theta.back().front();
    const double f3_num = sol.deviations.back().order(3).front();
    const double po_num = polynomial_closed_form(f0_p3, theta_num)[1];
    const double gap_integrated = (po_num - f3_num) / f3_num;

    const bool gap_ok = std::abs(std::abs(gap_analytic) - 0.049) <= 0.001 &&
                        std::abs(gap_analytic - gap_integrated) <= 1e-6;

    CheckResult check;
    check.name = "closed-form-audit";
    check.passed = p2_gap <= 1e-13 && ratio_lo >= 3.6 && ratio_hi <= 4.4 &&
                   gap_ok;
    check.detail =
        "theta-polynomial vs exact deviation solution: p = 2 agreement " +
        fmt(p2_gap) + "; remainder doubling ratios in [" + fmt(ratio_lo) +
        ", " + fmt(ratio_hi) +
        "] (theta^2 scaling expects 4); finite-theta gap at p = 3, "
        "theta = 0.1: " +
        fmt(100.0 * gap_analytic) + "% analytic, " +
        fmt(100.0 * gap_integrated) + "% integrated (expected -4.9% +- 0.1%)";
    check.measured = {{"p2_gap", p2_gap},
                      {"remainder_ratio_min", ratio_lo},
                      {"remainder_ratio_max", ratio_hi},
                      {"gap_analytic", gap_analytic},
                      {"gap_integrated", gap_integrated}};
    return check;
}

FluctuationGrowthReport run_fluctuation_growth(
    const ToleranceProfile& profile) {
    FluctuationGrowthReport report;
    PhysicalParams params;
    const WaveSystem system = capillary_system(params.surface_tension,
                                               params.density);
    const std::vector<double> grid = geometric_grid(1.0, 4.0, 5);
    const IsotropicSpectrum n0 = zf_spectrum(params, grid);
    const RateField field = rate_field(system, n0, grid, profile.quadrature);
    const RateProvider provider = RateProvider::frozen_stationary(field, n0);

    const RateConstantReport rc = dimensionless_rate_constant(
        capillary_system(1.0, 1.0), profile.quadrature);
    const double prefactor =
        rc.value * params.kz_constant / (16.0 * std::numbers::pi);

    const MomentHierarchy start =
        init_hierarchy(n0, 2, InitKind::deterministic);
    HierarchyControls controls;
    controls.ode.rtol = profile.ode_rtol;
    const std::size_t steps = 12;
    const double t_end = 2.5 / field.gamma.front();
    for (std::size_t j = 1; j <= steps; ++j) {
        controls.checkpoints.push_back(t_end * (static_cast<double>(j) /
                                                static_cast<double>(steps)));
    }
    const HierarchySolution sol =
        evolve_hierarchy(provider, start, t_end, controls);

    report.table.header = {"k", "t", "theta", "xi2", "xi2_pred"};
    double max_rel = 0.0;
    std::size_t sampled = 0;
    std::vector<std::vector<double>> decay_t(grid.size()),
        decay_logy(grid.size());
    for (std::size_t c = 0; c < sol.times.size(); ++c) {
        const std::vector<double> xs = xi(sol.trajectory[c]);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double xi2 = xs[i] * xs[i];
            const double pred =
                xi_growth_curve(params, grid[i], sol.times[c], prefactor);
            report.table.rows.push_back(
                {grid[i], sol.times[c], sol.theta[c][i], xi2, pred});
            if (c == 0) continue;
            // Saturation-law fit data: ln(1 - xi^2/n^2) = -2 gamma t, kept
            // away from the relative-noise floor near full saturation.
            const double n = n0.values()[i];
            const double y = 1.0 - xi2 / (n * n);
            if (y > 1e-4) {
                decay_t[i].push_back(sol.times[c]);
                decay_logy[i].push_back(std::log(y));
            }
            if (c % 3 == 0) {
                max_rel = std::max(max_rel, std::abs(xi2 - pred) / pred);
                ++sampled;
            }
        }
    }
    report.max_rel_error = max_rel;

    std::vector<double> log_k, log_tsat;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double gamma_meas =
            -0.5 * fit_slope_through_origin(decay_t[i], decay_logy[i]);
        log_k.push_back(std::log(grid[i]));
        log_tsat.push_back(std::log(std::log(2.0) / (2.0 * gamma_meas)));
    }
    report.saturation_slope = fit_slope(log_k, log_tsat);

    CheckResult growth;
    growth.name = "fluctuation-growth";
    growth.passed = max_rel <= 1e-6;
    growth.detail = "xi^2 growth from a deterministic start vs the "
                    "closed-form curve at " +
                    std::to_string(sampled) +
                    " sampled (k, t) points: worst relative error " +
                    fmt(max_rel) + " (budget 1e-6)";
    growth.measured = {{"sampled_points", sampled},
                       {"max_rel_error", max_rel}};
    report.checks.push_back(std::move(growth));

    CheckResult slope;
    slope.name = "fluctuation-saturation-slope";
    const double target = -0.75;
    slope.passed =
        std::abs(report.saturation_slope - target) <= 0.02 * std::abs(target);
    slope.detail = "saturation time vs k log-log slope = " +
                   fmt(report.saturation_slope) +
                   " (expected -0.75 within 2%)";
    slope.measured = {{"slope", report.saturation_slope},
                      {"expected", target}};
    report.checks.push_back(std::move(slope));
    return report;
}

TransportWaveReport run_transport_wave(const ToleranceProfile& profile) {
    TransportWaveReport report;
    PhysicalParams params;
    const WaveSystem system = capillary_system(params.surface_tension,
                                               params.density);
    // A single probed wavenumber (plus a neighbor so the spectrum keeps its
    // power-law interpolation), placed where n < 1 so that p! n^p stays
    // finite through P = 160.
    const std::vector<double> grid = geometric_grid(2.0, 2.2, 2);
    const IsotropicSpectrum n0 = zf_spectrum(params, grid);
    const RateField field = rate_field(system, n0, grid, profile.quadrature);
    const RateProvider provider = RateProvider::frozen_stationary(field, n0);

    const int max_order = 160;
    const double x0 = std::log(32.0);
    const double bump_width = 0.4;
    const double bump_height = 0.1;
    std::vector<std::vector<double>> f_table(
        max_order - 1, std::vector<double>(grid.size()));
    for (int p = 2; p <= max_order; ++p) {
        const double dx = std::log(static_cast<double>(p)) - x0;
        const double f =
            bump_height *
            std::exp(-dx * dx / (2.0 * bump_width * bump_width));
        f_table[static_cast<std::size_t>(p) - 2].assign(grid.size(), f);
    }
    const MomentHierarchy start = init_hierarchy(n0, max_order, f_table);

    HierarchyControls controls;
    controls.ode.rtol = profile.ode_rtol;
    const double gamma_probe = field.gamma.front();
    const double theta_end = 1.0;
    const double t_end = theta_end / gamma_probe;
    for (int j = 1; j <= 10; ++j) {
        controls.checkpoints.push_back(t_end * (j / 10.0));
    }
    const HierarchySolution sol =
        evolve_hierarchy(provider, start, t_end, controls);

    const std::size_t probe = 0;
    report.diagnostics = transport_wave_diagnostic(sol, probe);
    const TransportReport& diag = report.diagnostics;

    double width_dev = 0.0;
    for (double w : diag.width) {
        width_dev = std::max(width_dev, std::abs(w / diag.width.front() - 1.0));
    }
    report.max_width_deviation = width_dev;
    const int p_seed = 32;
    report.fixed_p_ratio = sol.deviations.back().order(p_seed)[probe] /
                           sol.deviations.front().order(p_seed)[probe];

    report.snapshots.header = {"theta", "p", "x", "F"};
    for (std::size_t c = 0; c < sol.deviations.size(); c += 2) {
        for (int p = 2; p <= max_order; ++p) {
            report.snapshots.rows.push_back(
                {sol.theta[c][probe], static_cast<double>(p),
                 std::log(static_cast<double>(p)),
                 sol.deviations[c].order(p)[probe]});
        }
    }

    CheckResult speed;
    speed.name = "transport-speed";
    speed.passed = std::abs(diag.speed - 1.0) <= 0.05 && !diag.truncated;
    speed.detail = "bump argmax speed in x = ln p: " + fmt(diag.speed) +
                   " per unit theta (expected 1.00 +- 0.05)";
    speed.measured = {{"speed", diag.speed}, {"truncated", diag.truncated}};
    report.checks.push_back(std::move(speed));

    CheckResult width;
    width.name = "transport-width";
    width.passed = width_dev <= 0.10 && !diag.truncated;
    width.detail = "bump width in x: worst deviation from the initial "
                   "width " +
                   fmt(100.0 * width_dev) + "% (budget 10%)";
    width.measured = {{"max_width_deviation", width_dev},
                      {"initial_width", diag.width.front()},
                      {"final_width", diag.width.back()}};
    report.checks.push_back(std::move(width));

    CheckResult peak;
    peak.name = "transport-peak";
    peak.passed = diag.peak_decay_per_theta < 0.10 && !diag.truncated;
    peak.detail = "moving-peak amplitude decay: " +
                  fmt(100.0 * diag.peak_decay_per_theta) +
                  "% per unit theta at seed order 32 (budget 10%)";
    peak.measured = {{"peak_decay_per_theta", diag.peak_decay_per_theta},
                     {"initial_peak", diag.peak.front()},
                     {"final_peak", diag.peak.back()}};
    report.checks.push_back(std::move(peak));

    CheckResult fixed;
    fixed.name = "transport-fixed-p";
    fixed.passed = report.fixed_p_ratio <= std::exp(-1.0);
    fixed.detail = "fixed-order F at p = 32 after theta = 1: retained "
                   "fraction " +
                   fmt(report.fixed_p_ratio) +
                   " (exponential decay expects well under e^{-1} = 0.368, "
                   "against " +
                   fmt(1.0 - diag.peak_decay_per_theta) +
                   " retained at the moving peak)";
    fixed.measured = {{"fixed_p_ratio", report.fixed_p_ratio},
                      {"peak_retained", 1.0 - diag.peak_decay_per_theta}};
    report.checks.push_back(std::move(fixed));
    return report;
}

OracleReport run_oracle(const ToleranceProfile& profile, std::uint64_t seed) {
    OracleReport report;
    report.triads.header = {"k", "k1", "k2", "analytic", "mc", "mc_err", "z"};
    double worst_z = 0.0;
    std::size_t converged = 0;
    angular_scan(profile, seed, &report.triads, worst_z, converged);

    CheckResult angular;
    angular.name = "oracle-angular";
    angular.passed =
        std::abs(worst_z) <= 3.0 && converged == profile.oracle_triads;
    angular.detail = "angular weight vs Monte-Carlo on " +
                     std::to_string(profile.oracle_triads) +
                     " seeded triads: worst z = " + fmt(worst_z) + ", " +
                     std::to_string(converged) + "/" +
                     std::to_string(profile.oracle_triads) + " converged";
    angular.measured = {{"worst_z", worst_z},
                        {"converged", converged},
                        {"triads", profile.oracle_triads},
                        {"samples", profile.oracle_samples}};
    report.checks.push_back(std::move(angular));

    const WaveSystem system = capillary_system(1.0, 1.0);
    const SpectrumFn smooth = [](double k) { return std::exp(-k); };
    const RateSample quad = rates_at(system, smooth, 1.0, profile.quadrature);
    const McRateReport mc =
        mc_rate_oracle(system, smooth, 1.0, 40.0,
                       profile.rate_oracle_samples, seed + 12345);
    report.rate_z_gamma = (mc.gamma - quad.gamma) / mc.gamma_std_error;
    report.rate_z_eta = (mc.eta - quad.eta) / mc.eta_std_error;

    CheckResult rate;
    rate.name = "oracle-rates";
    rate.passed = std::abs(report.rate_z_gamma) <= 3.0 &&
                  std::abs(report.rate_z_eta) <= 3.0;
    rate.detail = "brute-force rate estimate vs quadrature on a smooth "
                  "spectrum at k = 1: z_gamma = " +
                  fmt(report.rate_z_gamma) +
                  ", z_eta = " + fmt(report.rate_z_eta) + " (budget 3)";
    rate.measured = {{"z_gamma", report.rate_z_gamma},
                     {"z_eta", report.rate_z_eta},
                     {"quadrature_gamma", quad.gamma},
                     {"quadrature_eta", quad.eta},
                     {"mc_gamma", mc.gamma},
                     {"mc_gamma_std_error", mc.gamma_std_error},
                     {"mc_eta", mc.eta},
                     {"mc_eta_std_error", mc.eta_std_error},
                     {"samples", profile.rate_oracle_samples}};
    report.checks.push_back(std::move(rate));
    return report;
}

ValidationOutputs run_validation_suite(const ToleranceProfile& profile,
                                       std::uint64_t seed) {
    ValidationOutputs out;
    ConstantsReport constants = run_constants(profile, seed);
    for (auto& c : constants.checks) out.checks.push_back(std::move(c));
    out.checks.push_back(check_prefactor_identity(profile));
    out.checks.push_back(check_zf_stationarity(profile));
    out.checks.push_back(check_angular_oracle(profile, seed + 1));
    out.checks.push_back(check_rayleigh_jeans_null(profile, seed + 2));
    out.checks.push_back(check_gaussian_fixed_point(profile));
    out.checks.push_back(check_deviation_dynamics(profile));
    out.checks.push_back(check_closed_form_audit(profile));
    FluctuationGrowthReport growth = run_fluctuation_growth(profile);
    for (auto& c : growth.checks) out.checks.push_back(std::move(c));
    out.fluctuation_growth = std::move(growth.table);
    TransportWaveReport transport = run_transport_wave(profile);
    for (auto& c : transport.checks) out.checks.push_back(std::move(c));
    out.transport_snapshots = std::move(transport.snapshots);
    return out;
}

} // namespace wavekin
