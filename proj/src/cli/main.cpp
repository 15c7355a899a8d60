#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavekin/checks.hpp"
#include "wavekin/config.hpp"
#include "wavekin/core.hpp"
#include "wavekin/csvio.hpp"
#include "wavekin/kinetic.hpp"
#include "wavekin/manifest.hpp"
#include "wavekin/moments.hpp"
#include "wavekin/rates.hpp"
#include "wavekin/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace wavekin;

namespace {

struct GlobalOptions {
    std::string config_path; // empty: built-in defaults
    std::string out_dir = "wavekin_out";
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string profile_name = "strict";
};

// The physical setup shared by the computation subcommands, read from the
// [system], [spectrum], [grid], and [quadrature] sections.
struct Setup {
    WaveSystem system;
    PhysicalParams params;
    std::vector<double> grid;
    IsotropicSpectrum spectrum;
    QuadratureControls quadrature;

    Setup(WaveSystem s, PhysicalParams p, std::vector<double> g,
          IsotropicSpectrum n, QuadratureControls q)
        : system(std::move(s)),
          params(p),
          grid(std::move(g)),
          spectrum(std::move(n)),
          quadrature(q) {}
};

QuadratureControls quadrature_from_config(const Config& cfg,
                                          QuadratureControls defaults) {
    QuadratureControls q = defaults;
    q.epsrel = cfg.get_double("quadrature", "epsrel", q.epsrel);
    q.epsabs = cfg.get_double("quadrature", "epsabs", q.epsabs);
    q.limit = static_cast<std::size_t>(
        cfg.get_int("quadrature", "limit",
                    static_cast<long long>(q.limit)));
    return q;
}

OdeControls ode_from_config(const Config& cfg, double rtol_default) {
    OdeControls ode;
    ode.rtol = cfg.get_double("integrator", "rtol", rtol_default);
    ode.atol = cfg.get_double("integrator", "atol", ode.atol);
    ode.initial_step =
        cfg.get_double("integrator", "initial_step", ode.initial_step);
    ode.max_step = cfg.get_double("integrator", "max_step", ode.max_step);
    ode.max_steps = static_cast<std::size_t>(cfg.get_int(
        "integrator", "max_steps", static_cast<long long>(ode.max_steps)));
    return ode;
}

Setup setup_from_config(const Config& cfg,
                        const QuadratureControls& quad_defaults) {
    PhysicalParams params;
    params.surface_tension =
        cfg.get_double("system", "surface_tension", params.surface_tension);
    params.density = cfg.get_double("system", "density", params.density);
    params.energy_flux =
        cfg.get_double("spectrum", "energy_flux", params.energy_flux);
    params.kz_constant =
        cfg.get_double("spectrum", "kz_constant", params.kz_constant);
    params.validate();

    const std::string system_kind =
        cfg.get_string("system", "kind", "capillary");
    WaveSystem system;
    if (system_kind == "capillary") {
        system = capillary_system(params.surface_tension, params.density);
    } else if (system_kind == "toy") {
        system = toy_system();
    } else if (system_kind == "linear") {
        system = linear_dispersion_system();
    } else {
        throw ConfigError("system.kind must be capillary, toy, or linear "
                          "(got \"" +
                          system_kind + "\")");
    }
    system.epsilon = cfg.get_double("system", "epsilon", system.epsilon);

    const double k_min = cfg.get_double("grid", "k_min", 0.5);
    const double k_max = cfg.get_double("grid", "k_max", 2.0);
    const long long nodes = cfg.get_int("grid", "nodes", 5);
    if (nodes < 2) {
        throw ConfigError("grid.nodes must be at least 2");
    }
    std::vector<double> grid =
        geometric_grid(k_min, k_max, static_cast<std::size_t>(nodes));

    const std::string spectrum_kind =
        cfg.get_string("spectrum", "kind", "zf");
    IsotropicSpectrum spectrum = [&]() -> IsotropicSpectrum {
        if (spectrum_kind == "zf") {
            return zf_spectrum(params, grid);
        }
        if (spectrum_kind == "rayleigh_jeans") {
            const double temperature =
                cfg.get_double("spectrum", "temperature", 1.0);
            return rayleigh_jeans_spectrum(system, temperature, grid);
        }
        if (spectrum_kind == "power_law") {
            const double amplitude = cfg.get_double("spectrum", "amplitude");
            const double exponent = cfg.get_double("spectrum", "exponent");
            return power_law_spectrum(amplitude, exponent, grid);
        }
        throw ConfigError("spectrum.kind must be zf, rayleigh_jeans, or "
                          "power_law (got \"" +
                          spectrum_kind + "\")");
    }();

    return Setup(std::move(system), params, std::move(grid),
                 std::move(spectrum), quadrature_from_config(cfg,
                                                             quad_defaults));
}

RateMode rate_mode_from_config(const Config& cfg, RateMode fallback) {
    const std::string def = fallback == RateMode::self_consistent
                                ? "self_consistent"
                                : (fallback == RateMode::frozen
                                       ? "frozen"
                                       : "frozen_stationary");
    const std::string mode = cfg.get_string("scenario", "rate_mode", def);
    if (mode == "self_consistent") return RateMode::self_consistent;
    if (mode == "frozen") return RateMode::frozen;
    if (mode == "frozen_stationary") return RateMode::frozen_stationary;
    throw ConfigError("scenario.rate_mode must be self_consistent, frozen, "
                      "or frozen_stationary (got \"" +
                      mode + "\")");
}

// Evenly spaced checkpoints reaching t_end exactly.
std::vector<double> even_checkpoints(double t_end, long long count) {
    if (count < 1) {
        throw ConfigError("scenario.checkpoints must be at least 1");
    }
    std::vector<double> out;
    for (long long j = 1; j <= count; ++j) {
        out.push_back(t_end * (static_cast<double>(j) /
                               static_cast<double>(count)));
    }
    return out;
}

std::string artifact_path(const std::string& out_dir,
                          const std::string& name) {
    return (fs::path(out_dir) / name).string();
}

void write_text_artifact(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

// Gnuplot script for the fluctuation growth figure: one xi^2(t) trace per
// grid node (points) over the closed-form saturation law (lines).
std::string xi_growth_plot_script(std::size_t nodes,
                                  const std::string& csv_name) {
    std::string s;
    s += "# Fluctuation growth curves: measured xi^2(k, t) per wavenumber\n";
    s += "# (points) against the closed-form saturation law (lines).\n";
    s += "# Usage: gnuplot -persist " + csv_name + ".gp (run from the\n";
    s += "# directory containing " + csv_name + ")\n";
    s += "set datafile separator \",\"\n";
    s += "set xlabel \"t\"\n";
    s += "set ylabel \"xi^2(k, t)\"\n";
    s += "set key left top\n";
    s += "nodes = " + std::to_string(nodes) + "\n";
    s += "plot for [i=0:nodes-1] \"" + csv_name +
         "\" skip 1 every nodes::i using 2:4 with points pt 7 "
         "title sprintf(\"xi^2, node %d\", i), \\\n";
    s += "     for [i=0:nodes-1] \"" + csv_name +
         "\" skip 1 every nodes::i using 2:5 with lines lc \"gray\" "
         "notitle\n";
    return s;
}

// Gnuplot script for the deviation-wave figure: F against x = ln p, one
// curve per recorded snapshot.
std::string transport_plot_script(std::size_t snapshots,
                                  std::size_t rows_per_snapshot,
                                  const std::string& csv_name) {
    std::string s;
    s += "# Deviation-wave snapshots: F^(p) against x = ln p at a sequence\n";
    s += "# of renormalized times theta.\n";
    s += "# Usage: gnuplot -persist " + csv_name + ".gp (run from the\n";
    s += "# directory containing " + csv_name + ")\n";
    s += "set datafile separator \",\"\n";
    s += "set xlabel \"x = ln p\"\n";
    s += "set ylabel \"F\"\n";
    s += "set key right top\n";
    s += "rows = " + std::to_string(rows_per_snapshot) + "\n";
    s += "plot for [s=0:" + std::to_string(snapshots - 1) + "] \"" +
         csv_name +
         "\" skip 1 every ::(s*rows)::(s*rows+rows-1) using 3:4 "
         "with lines title sprintf(\"snapshot %d\", s)\n";
    return s;
}

// Rows per snapshot in the transport table (consecutive rows sharing the
// leading theta value).
std::size_t transport_rows_per_snapshot(const CsvTable& table) {
    if (table.rows.empty()) return 0;
    const double theta0 = table.rows.front()[0];
    std::size_t count = 0;
    for (const auto& row : table.rows) {
        if (row[0] != theta0) break;
        ++count;
    }
    return count;
}

ordered_json checks_to_json(const std::vector<CheckResult>& checks) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json rec;
        rec["name"] = c.name;
        rec["passed"] = c.passed;
        rec["detail"] = c.detail;
        rec["measured"] = c.measured;
        arr.push_back(std::move(rec));
    }
    return arr;
}

// Runs a subcommand body under a fresh manifest: creates the output
// directory, echoes the configuration, times the run, records runtime
// failures as machine-readable errors, and always writes run_manifest.json.
// Returns the process exit code.
int with_manifest(const GlobalOptions& opts, const Config& cfg,
                  const std::string& subcommand,
                  const std::function<void(RunManifest&)>& body) {
    fs::create_directories(opts.out_dir);
    RunManifest manifest(subcommand, opts.seed);
    if (!opts.config_path.empty()) {
        manifest.set_config_echo(cfg, opts.config_path);
    }
    manifest.set_field("tolerance_profile", opts.profile_name);
    manifest.set_field("threads", opts.threads);

    const auto t0 = std::chrono::steady_clock::now();
    bool runtime_error = false;
    try {
        body(manifest);
    } catch (const std::exception& e) {
        manifest.add_error("runtime", e.what());
        runtime_error = true;
    }
    const auto t1 = std::chrono::steady_clock::now();
    manifest.set_wall_seconds(std::chrono::duration<double>(t1 - t0).count());
    manifest.write(artifact_path(opts.out_dir, "run_manifest.json"));

    if (runtime_error) {
        std::fprintf(stderr, "%s: run failed; see %s\n", subcommand.c_str(),
                     artifact_path(opts.out_dir, "run_manifest.json").c_str());
        return 1;
    }
    const ordered_json doc = manifest.to_json();
    for (const auto& line : doc.at("checks")) {
        std::printf("[%s] %s: %s\n",
                    line["passed"].get<bool>() ? "PASS" : "FAIL",
                    line["name"].get<std::string>().c_str(),
                    line["detail"].get<std::string>().c_str());
    }
    return manifest.all_passed() ? 0 : 1;
}

void add_checks(RunManifest& manifest, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        manifest.add_check(c.name, c.passed, c.detail, c.measured);
    }
}

int cmd_rates(const Config& cfg, const GlobalOptions& opts,
              const ToleranceProfile& profile) {
    const Setup setup = setup_from_config(cfg, profile.quadrature);
    cfg.require_all_consumed();
    return with_manifest(opts, cfg, "rates", [&](RunManifest& manifest) {
        const RateField field = rate_field(setup.system, setup.spectrum,
                                           setup.grid, setup.quadrature,
                                           opts.threads);
        const std::string spec_path =
            artifact_path(opts.out_dir, "spectrum.csv");
        write_spectrum_csv(spec_path, setup.spectrum);
        manifest.add_artifact(spec_path);
        const std::string rate_path =
            artifact_path(opts.out_dir, "rates.csv");
        write_rate_csv(rate_path, field);
        manifest.add_artifact(rate_path);
    });
}

int cmd_ke(const Config& cfg, const GlobalOptions& opts,
           const ToleranceProfile& profile) {
    const Setup setup = setup_from_config(cfg, profile.quadrature);
    KineticControls controls;
    controls.mode = rate_mode_from_config(cfg, RateMode::self_consistent);
    controls.ode = ode_from_config(cfg, profile.ode_rtol);
    controls.quadrature = setup.quadrature;
    controls.threads = opts.threads;
    const double t_end = cfg.get_double("scenario", "t_end", 1.0);
    controls.checkpoints =
        even_checkpoints(t_end, cfg.get_int("scenario", "checkpoints", 8));
    cfg.require_all_consumed();

    return with_manifest(opts, cfg, "ke", [&](RunManifest& manifest) {
        const SpectrumTrajectory traj =
            evolve_ke(setup.system, setup.spectrum, t_end, controls);
        for (std::size_t c = 0; c < traj.spectra.size(); ++c) {
            char name[32];
            std::snprintf(name, sizeof name, "spectrum_%02zu.csv", c);
            const std::string path = artifact_path(opts.out_dir, name);
            write_spectrum_csv(path, traj.spectra[c]);
            manifest.add_artifact(path);
        }
        ordered_json record;
        record["times"] = traj.times;
        record["energy"] = traj.energy;
        record["rate_mode"] =
            cfg.get_string("scenario", "rate_mode", "self_consistent");
        record["ode_rtol"] = controls.ode.rtol;
        record["quadrature_epsrel"] = controls.quadrature.epsrel;
        manifest.set_field("trajectory", std::move(record));
    });
}

int cmd_moments(const Config& cfg, const GlobalOptions& opts,
                const ToleranceProfile& profile) {
    const Setup setup = setup_from_config(cfg, profile.quadrature);
    const long long max_order = cfg.get_int("scenario", "max_order", 8);
    if (max_order < 1 || max_order > kMaxHierarchyOrder) {
        throw ConfigError("scenario.max_order must be in [1, " +
                          std::to_string(kMaxHierarchyOrder) + "]");
    }
    const RateMode mode =
        rate_mode_from_config(cfg, RateMode::frozen_stationary);

    const std::string init = cfg.get_string("scenario", "init", "gaussian");
    MomentHierarchy start = [&]() -> MomentHierarchy {
        if (init == "gaussian") {
            return init_hierarchy(setup.spectrum,
                                  static_cast<int>(max_order),
                                  InitKind::gaussian);
        }
        if (init == "deterministic") {
            return init_hierarchy(setup.spectrum,
                                  static_cast<int>(max_order),
                                  InitKind::deterministic);
        }
        if (init == "custom") {
            // scenario.deviations lists F^(p)(0) for p = 2, 3, ...; orders
            // beyond the list start Gaussian. The same value applies at
            // every grid node.
            const std::vector<double> f0 =
                cfg.get_double_list("scenario", "deviations", {});
            if (f0.size() + 1 > static_cast<std::size_t>(max_order)) {
                throw ConfigError("scenario.deviations lists more orders "
                                  "than scenario.max_order allows");
            }
            std::vector<std::vector<double>> f_table(
                static_cast<std::size_t>(max_order) - 1,
                std::vector<double>(setup.grid.size(), 0.0));
            for (std::size_t j = 0; j < f0.size(); ++j) {
                f_table[j].assign(setup.grid.size(), f0[j]);
            }
            return init_hierarchy(setup.spectrum,
                                  static_cast<int>(max_order), f_table);
        }
        throw ConfigError("scenario.init must be gaussian, deterministic, "
                          "or custom (got \"" +
                          init + "\")");
    }();

    HierarchyControls controls;
    controls.ode = ode_from_config(cfg, profile.ode_rtol);
    const double t_end = cfg.get_double("scenario", "t_end", 1.0);
    controls.checkpoints =
        even_checkpoints(t_end, cfg.get_int("scenario", "checkpoints", 8));
    cfg.require_all_consumed();

    return with_manifest(opts, cfg, "moments", [&](RunManifest& manifest) {
        const RateField field = rate_field(setup.system, setup.spectrum,
                                           setup.grid, setup.quadrature,
                                           opts.threads);
        const RateProvider provider = [&]() -> RateProvider {
            switch (mode) {
                case RateMode::frozen:
                    return RateProvider::frozen(field);
                case RateMode::frozen_stationary:
                    return RateProvider::frozen_stationary(field,
                                                           setup.spectrum);
                case RateMode::self_consistent:
                default:
                    return RateProvider::self_consistent(
                        setup.system, setup.quadrature, opts.threads);
            }
        }();
        const HierarchySolution sol =
            evolve_hierarchy(provider, start, t_end, controls);

        for (std::size_t c = 0; c < sol.trajectory.size(); ++c) {
            char name[32];
            std::snprintf(name, sizeof name, "hierarchy_%02zu.csv", c);
            const std::string path = artifact_path(opts.out_dir, name);
            write_hierarchy_csv(path, sol.trajectory[c]);
            manifest.add_artifact(path);
            if (max_order >= 2) {
                std::snprintf(name, sizeof name, "deviations_%02zu.csv", c);
                const std::string dev_path =
                    artifact_path(opts.out_dir, name);
                write_deviation_csv(dev_path, sol.deviations[c]);
                manifest.add_artifact(dev_path);
            }
        }
        ordered_json record;
        record["times"] = sol.times;
        record["theta"] = sol.theta;
        ordered_json ctl;
        ctl["max_order"] = max_order;
        ctl["rate_mode"] = cfg.get_string("scenario", "rate_mode",
                                          "frozen_stationary");
        ctl["ode_rtol"] = controls.ode.rtol;
        ctl["quadrature_epsrel"] = setup.quadrature.epsrel;
        record["controls"] = std::move(ctl);
        manifest.set_field("solution", std::move(record));
    });
}

int cmd_constants(const Config& cfg, const GlobalOptions& opts,
                  ToleranceProfile profile) {
    profile.quadrature = quadrature_from_config(cfg, profile.quadrature);
    profile.rate_oracle_samples = static_cast<std::size_t>(cfg.get_int(
        "scenario", "rate_samples",
        static_cast<long long>(profile.rate_oracle_samples)));
    cfg.require_all_consumed();

    return with_manifest(opts, cfg, "constants", [&](RunManifest& manifest) {
        const ConstantsReport report = run_constants(profile, opts.seed);
        add_checks(manifest, report.checks);
        const CheckResult prefactor = check_prefactor_identity(profile);
        manifest.add_check(prefactor.name, prefactor.passed, prefactor.detail,
                           prefactor.measured);
        ordered_json record;
        record["constant"] = report.constant;
        record["constant_rel_error"] = report.constant_rel_error;
        record["decay_prefactor"] = report.decay_prefactor;
        record["normalization_discrepancy"] =
            report.normalization_discrepancy;
        record["mc_z_gamma"] = report.mc_z_gamma;
        record["mc_z_eta"] = report.mc_z_eta;
        record["mc_verdict"] = report.mc_verdict;
        manifest.set_field("constants", std::move(record));
    });
}

int cmd_capillary_fluctuations(const Config& cfg, const GlobalOptions& opts,
                               ToleranceProfile profile) {
    profile.quadrature = quadrature_from_config(cfg, profile.quadrature);
    profile.ode_rtol =
        cfg.get_double("integrator", "rtol", profile.ode_rtol);
    cfg.require_all_consumed();

    return with_manifest(
        opts, cfg, "capillary-fluctuations", [&](RunManifest& manifest) {
            const FluctuationGrowthReport report =
                run_fluctuation_growth(profile);
            add_checks(manifest, report.checks);

            const std::string csv_path =
                artifact_path(opts.out_dir, "xi_growth.csv");
            write_csv(csv_path, report.table);
            manifest.add_artifact(csv_path);

            std::size_t nodes = 0;
            if (!report.table.rows.empty()) {
                const double t0 = report.table.rows.front()[1];
                for (const auto& row : report.table.rows) {
                    if (row[1] != t0) break;
                    ++nodes;
                }
            }
            const std::string plot_path =
                artifact_path(opts.out_dir, "xi_growth.csv.gp");
            write_text_artifact(plot_path,
                                xi_growth_plot_script(nodes,
                                                      "xi_growth.csv"));
            manifest.add_artifact(plot_path);

            ordered_json record;
            record["max_rel_error"] = report.max_rel_error;
            record["saturation_slope"] = report.saturation_slope;
            manifest.set_field("fluctuation_growth", std::move(record));
        });
}

int cmd_transport_wave(const Config& cfg, const GlobalOptions& opts,
                       ToleranceProfile profile) {
    profile.quadrature = quadrature_from_config(cfg, profile.quadrature);
    profile.ode_rtol =
        cfg.get_double("integrator", "rtol", profile.ode_rtol);
    cfg.require_all_consumed();

    return with_manifest(
        opts, cfg, "transport-wave", [&](RunManifest& manifest) {
            const TransportWaveReport report = run_transport_wave(profile);
            add_checks(manifest, report.checks);

            const std::string csv_path =
                artifact_path(opts.out_dir, "transport_snapshots.csv");
            write_csv(csv_path, report.snapshots);
            manifest.add_artifact(csv_path);

            const std::size_t rows_per =
                transport_rows_per_snapshot(report.snapshots);
            const std::string plot_path =
                artifact_path(opts.out_dir, "transport_snapshots.csv.gp");
            write_text_artifact(
                plot_path,
                transport_plot_script(
                    rows_per == 0 ? 0
                                  : report.snapshots.rows.size() / rows_per,
                    rows_per, "transport_snapshots.csv"));
            manifest.add_artifact(plot_path);

            ordered_json record;
            record["speed"] = report.diagnostics.speed;
            record["width_growth"] = report.diagnostics.width_growth;
            record["peak_decay_per_theta"] =
                report.diagnostics.peak_decay_per_theta;
            record["max_width_deviation"] = report.max_width_deviation;
            record["fixed_p_ratio"] = report.fixed_p_ratio;
            record["truncated"] = report.diagnostics.truncated;
            manifest.set_field("transport", std::move(record));
        });
}

int cmd_oracle(const Config& cfg, const GlobalOptions& opts,
               ToleranceProfile profile) {
    profile.quadrature = quadrature_from_config(cfg, profile.quadrature);
    profile.oracle_triads = static_cast<std::size_t>(
        cfg.get_int("scenario", "triads",
                    static_cast<long long>(profile.oracle_triads)));
    profile.oracle_samples = static_cast<std::size_t>(
        cfg.get_int("scenario", "samples",
                    static_cast<long long>(profile.oracle_samples)));
    profile.rate_oracle_samples = static_cast<std::size_t>(cfg.get_int(
        "scenario", "rate_samples",
        static_cast<long long>(profile.rate_oracle_samples)));
    cfg.require_all_consumed();

    return with_manifest(opts, cfg, "oracle", [&](RunManifest& manifest) {
        const OracleReport report = run_oracle(profile, opts.seed);
        add_checks(manifest, report.checks);
        const std::string csv_path =
            artifact_path(opts.out_dir, "oracle_triads.csv");
        write_csv(csv_path, report.triads);
        manifest.add_artifact(csv_path);
    });
}

int cmd_validate(const Config& cfg, const GlobalOptions& opts,
                 ToleranceProfile profile) {
    profile.quadrature = quadrature_from_config(cfg, profile.quadrature);
    profile.ode_rtol =
        cfg.get_double("integrator", "rtol", profile.ode_rtol);
    cfg.require_all_consumed();

    return with_manifest(opts, cfg, "validate", [&](RunManifest& manifest) {
        const ValidationOutputs out =
            run_validation_suite(profile, opts.seed);
        add_checks(manifest, out.checks);

        const std::string checks_path =
            artifact_path(opts.out_dir, "validation_checks.json");
        write_text_artifact(checks_path,
                            checks_to_json(out.checks).dump(2) + "\n");
        manifest.add_artifact(checks_path);

        const std::string xi_path =
            artifact_path(opts.out_dir, "xi_growth.csv");
        write_csv(xi_path, out.fluctuation_growth);
        manifest.add_artifact(xi_path);
        std::size_t nodes = 0;
        if (!out.fluctuation_growth.rows.empty()) {
            const double t0 = out.fluctuation_growth.rows.front()[1];
            for (const auto& row : out.fluctuation_growth.rows) {
                if (row[1] != t0) break;
                ++nodes;
            }
        }
        const std::string xi_plot =
            artifact_path(opts.out_dir, "xi_growth.csv.gp");
        write_text_artifact(xi_plot,
                            xi_growth_plot_script(nodes, "xi_growth.csv"));
        manifest.add_artifact(xi_plot);

        const std::string tw_path =
            artifact_path(opts.out_dir, "transport_snapshots.csv");
        write_csv(tw_path, out.transport_snapshots);
        manifest.add_artifact(tw_path);
        const std::size_t rows_per =
            transport_rows_per_snapshot(out.transport_snapshots);
        const std::string tw_plot =
            artifact_path(opts.out_dir, "transport_snapshots.csv.gp");
        write_text_artifact(
            tw_plot,
            transport_plot_script(
                rows_per == 0
                    ? 0
                    : out.transport_snapshots.rows.size() / rows_per,
                rows_per, "transport_snapshots.csv"));
        manifest.add_artifact(tw_plot);
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavekin: weakly nonlinear three-wave turbulence "
                 "statistics (mean-spectrum kinetic equation, waveaction "
                 "moment hierarchy, and their validation scenarios)"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--config", opts.config_path,
                   "Configuration file (sections: system, spectrum, grid, "
                   "quadrature, integrator, scenario)")
        ->envname("WAVEKIN_CONFIG");
    app.add_option("--out", opts.out_dir,
                   "Output directory for artifacts and run_manifest.json")
        ->envname("WAVEKIN_OUT")
        ->capture_default_str();
    app.add_option("--seed", opts.seed, "Monte-Carlo seed")
        ->envname("WAVEKIN_SEED")
        ->capture_default_str();
    app.add_option("--threads", opts.threads,
                   "Worker threads for rate-field evaluation")
        ->envname("WAVEKIN_THREADS")
        ->capture_default_str();
    app.add_option("--tolerance-profile", opts.profile_name,
                   "Numerical effort profile")
        ->envname("WAVEKIN_TOLERANCE_PROFILE")
        ->check(CLI::IsMember({"fast", "strict"}))
        ->capture_default_str();

    app.add_subcommand("rates",
                       "Decay/forcing rate field for a configured system "
                       "and spectrum");
    app.add_subcommand("ke", "Evolve the mean-spectrum kinetic equation");
    app.add_subcommand("moments",
                       "Evolve the waveaction moment hierarchy from "
                       "gaussian/deterministic/custom starts");
    app.add_subcommand("capillary-fluctuations",
                       "Fluctuation growth from a deterministic start on "
                       "the stationary capillary spectrum");
    app.add_subcommand("transport-wave",
                       "Deviation bump transported across moment orders");
    app.add_subcommand("constants",
                       "Dimensionless decay constant and prefactor with "
                       "error bars and the Monte-Carlo verdict");
    app.add_subcommand("validate", "Full validation suite");
    app.add_subcommand("oracle", "Seeded Monte-Carlo cross-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Config cfg;
        if (!opts.config_path.empty()) {
            cfg = Config::parse_file(opts.config_path);
        }
        const ToleranceProfile profile =
            ToleranceProfile::by_name(opts.profile_name);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "rates") return cmd_rates(cfg, opts, profile);
        if (sub == "ke") return cmd_ke(cfg, opts, profile);
        if (sub == "moments") return cmd_moments(cfg, opts, profile);
        if (sub == "capillary-fluctuations") {
            return cmd_capillary_fluctuations(cfg, opts, profile);
        }
        if (sub == "transport-wave") {
            return cmd_transport_wave(cfg, opts, profile);
        }
        if (sub == "constants") return cmd_constants(cfg, opts, profile);
        if (sub == "validate") return cmd_validate(cfg, opts, profile);
        if (sub == "oracle") return cmd_oracle(cfg, opts, profile);
        std::fprintf(stderr, "unknown subcommand: %s\n", sub.c_str());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
