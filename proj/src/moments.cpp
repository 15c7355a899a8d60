#include "wavekin/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

void require_order(int max_order) {
    if (max_order < 1 || max_order > kMaxHierarchyOrder) {
        throw std::invalid_argument(
            "hierarchy order must be in [1, " +
            std::to_string(kMaxHierarchyOrder) + "]");
    }
}

void require_finite_moment(double m) {
    if (!std::isfinite(m)) {
        throw std::domain_error(
            "moment initialization overflows double; reduce the order or "
            "the spectrum amplitude");
    }
}

} // namespace

MomentHierarchy init_hierarchy(const IsotropicSpectrum& spectrum,
                               int max_order, InitKind kind) {
    require_order(max_order);
    const auto& grid = spectrum.grid();
    const auto& n = spectrum.values();
    std::vector<std::vector<double>> values(
        max_order, std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(n[i] >= 0.0)) {
            throw std::domain_error(
                "hierarchy initialization needs a non-negative spectrum");
        }
        double m = 1.0;
        for (int p = 1; p <= max_order; ++p) {
            m *= n[i];
            if (kind == InitKind::gaussian) m *= p;
            require_finite_moment(m);
            values[p - 1][i] = m;
        }
    }
    return MomentHierarchy(grid, max_order, std::move(values));
}

MomentHierarchy init_hierarchy(
    const IsotropicSpectrum& spectrum, int max_order,
    const std::vector<std::vector<double>>& f_table) {
    require_order(max_order);
    const std::size_t rows = max_order >= 2
                                 ? static_cast<std::size_t>(max_order - 1)
                                 : 0;
    if (f_table.size() != rows) {
        throw std::invalid_argument(
            "deviation table must have one row per order p = 2..max_order");
    }
    const auto& grid = spectrum.grid();
    const auto& n = spectrum.values();
    std::vector<std::vector<double>> values(
        max_order, std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(n[i] > 0.0)) {
            throw std::domain_error(
                "deviation-table initialization needs a positive spectrum");
        }
        values[0][i] = n[i];
        double gp = n[i];
        for (int p = 2; p <= max_order; ++p) {
            const auto& row = f_table[static_cast<std::size_t>(p - 2)];
            if (row.size() != grid.size()) {
                throw std::invalid_argument(
                    "deviation table row size does not match the grid");
            }
            const double f = row[i];
            if (!std::isfinite(f) ||
                f < DeviationField::lower_bound(p) - 1e-12) {
                throw std::domain_error(
                    "deviation entry would make a moment negative");
            }
            gp *= p * n[i];
            require_finite_moment(gp);
            values[p - 1][i] = std::max(gp * (1.0 + f), 0.0);
        }
    }
    return MomentHierarchy(grid, max_order, std::move(values));
}

RateProvider RateProvider::frozen(const RateField& field) {
    field.validate();
    RateProvider p;
    p.mode = RateMode::frozen;
    p.gamma = field.gamma;
    p.eta = field.eta;
    return p;
}

RateProvider RateProvider::frozen_stationary(const RateField& field,
                                             const IsotropicSpectrum& n0) {
    field.validate();
    RateProvider p;
    p.mode = RateMode::frozen_stationary;
    p.gamma = field.gamma;
    p.n_eq.resize(field.grid.size());
    p.eta.resize(field.grid.size());
    for (std::size_t i = 0; i < field.grid.size(); ++i) {
        const double n = n0(field.grid[i]);
        if (!(n > 0.0)) {
            throw std::domain_error(
                "stationary-rate provider needs a positive spectrum");
        }
        p.n_eq[i] = n;
        // Forcing pinned to gamma * n0 so n0 is an exact fixed point of the
        // p = 1 equation rather than one only up to quadrature error.
        p.eta[i] = field.gamma[i] * n;
    }
    return p;
}

RateProvider RateProvider::self_consistent(const WaveSystem& system,
                                           const QuadratureControls& controls,
                                           unsigned threads) {
    RateProvider p;
    p.mode = RateMode::self_consistent;
    p.system = &system;
    p.quadrature = controls;
    p.threads = threads == 0 ? 1 : threads;
    return p;
}

HierarchySolution evolve_hierarchy(const RateProvider& provider,
                                   const MomentHierarchy& initial,
                                   double t_end,
                                   const HierarchyControls& controls) {
    const auto& grid = initial.grid();
    const std::size_t nodes = grid.size();
    const int max_order = initial.max_order();
    const std::size_t order = static_cast<std::size_t>(max_order);
    const std::size_t stride = order + 1; // moments plus the theta component
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("evolution horizon must be positive");
    }

    std::vector<double> checkpoints = controls.checkpoints;
    if (checkpoints.empty()) {
        checkpoints.push_back(t_end);
    } else if (checkpoints.back() > t_end) {
        throw std::invalid_argument("checkpoints must not pass the horizon");
    } else if (checkpoints.back() < t_end) {
        checkpoints.push_back(t_end);
    }

    const bool self = provider.mode == RateMode::self_consistent;
    std::vector<double> g = provider.gamma;
    std::vector<double> e = provider.eta;
    if (self) {
        if (provider.system == nullptr) {
            throw std::invalid_argument(
                "self-consistent rate provider has no wave system");
        }
        g.assign(nodes, 0.0);
        e.assign(nodes, 0.0);
    } else if (g.size() != nodes || e.size() != nodes) {
        throw std::invalid_argument(
            "frozen rate provider does not match the hierarchy grid");
    }

    // In the frozen modes the stepper advances D^(p) = M^(p) - p! nu^p with
    // nu = eta/gamma, the deviation from the rates' own equilibrium
    // hierarchy. D obeys the same triangular system with D^(0) = 0, and the
    // error controller then resolves the decaying departure instead of
    // holding a tolerance relative to the large static baseline. When the
    // equilibrium is unusable (gamma <= 0 or p! nu^p overflows) the shift
    // falls back to zero, which is plain M stepping for that node.
    std::vector<double> nu(nodes, 0.0);
    std::vector<double> mstar(self ? 0 : nodes * order, 0.0);
    if (!self) {
        for (std::size_t i = 0; i < nodes; ++i) {
            double nui = 0.0;
            if (provider.mode == RateMode::frozen_stationary) {
                if (provider.n_eq.size() != nodes) {
                    throw std::invalid_argument(
                        "stationary rate provider does not match the grid");
                }
                nui = provider.n_eq[i];
            } else if (g[i] > 0.0 && e[i] >= 0.0) {
                nui = e[i] / g[i];
            }
            std::vector<double> row(order);
            double m = 1.0;
            bool usable = nui > 0.0;
            for (std::size_t p = 1; usable && p <= order; ++p) {
                m *= static_cast<double>(p) * nui;
                if (!std::isfinite(m)) usable = false;
                else row[p - 1] = m;
            }
            if (usable) {
                nu[i] = nui;
                std::copy(row.begin(), row.end(),
                          mstar.begin() + static_cast<std::ptrdiff_t>(i * order));
            }
        }
    }

    std::vector<double> y(nodes * stride, 0.0);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t p = 1; p <= order; ++p) {
            const double m = initial.order(static_cast<int>(p))[i];
            y[i * stride + p - 1] = self ? m : m - mstar[i * order + p - 1];
        }
        y[i * stride + order] = 0.0;
    }

    // Per-component error floors at the natural magnitude of each order:
    // order p lives at p! n^p (the theta clock at 1). Without a floor, a
    // component rising from exactly zero stalls the controller (see
    // OdeControls::component_atol), and high orders would otherwise be held
    // to a relative tolerance far beyond what their p!-sized cancellations
    // can support.
    OdeControls ode = controls.ode;
    if (ode.component_atol.empty()) {
        ode.component_atol.assign(nodes * stride, 0.0);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double base = std::max(initial.order(1)[i], nu[i]);
            double scale = 1.0;
            for (std::size_t p = 1; p <= order; ++p) {
                scale *= static_cast<double>(p) * base;
                if (!std::isfinite(scale)) {
                    scale = std::numeric_limits<double>::max();
                }
                ode.component_atol[i * stride + p - 1] = ode.rtol * scale;
            }
            ode.component_atol[i * stride + order] = ode.rtol;
        }
    }

    auto rhs = [&](double, const std::vector<double>& state,
                   std::vector<double>& dstate) {
        for (std::size_t i = 0; i < nodes; ++i) {
            const double gi = g[i];
            const double ei = e[i];
            const double* s = &state[i * stride];
            double* d = &dstate[i * stride];
            double prev = self ? 1.0 : 0.0; // M^(0) = 1, D^(0) = 0
            for (std::size_t p = 1; p <= order; ++p) {
                const double pd = static_cast<double>(p);
                d[p - 1] = -pd * gi * s[p - 1] + pd * pd * ei * prev;
                prev = s[p - 1];
            }
            const double n = self ? s[0] : s[0] + nu[i];
            d[order] = ei / n; // renormalized time theta
        }
    };

    auto admissible = [&](const std::vector<double>& state) {
        for (std::size_t i = 0; i < nodes; ++i) {
            const double n =
                self ? state[i * stride] : state[i * stride] + nu[i];
            if (!(n > 0.0)) return false;
            // Reject steps that drive any moment negative beyond the
            // roundoff of the equilibrium scale.
            for (std::size_t p = 2; p <= order; ++p) {
                const double v = state[i * stride + p - 1];
                if (self) {
                    if (v < 0.0) return false;
                } else if (v + mstar[i * order + p - 1] <
                           -1e-12 * mstar[i * order + p - 1]) {
                    return false;
                }
            }
        }
        return true;
    };

    // Self-consistent mode: refresh the rates from the current spectrum at
    // the start of every attempted step (they are frozen within the step's
    // stages). Recomputation is skipped when the state did not change, which
    // covers retries after a rejected step.
    OdeCallback on_step_start;
    IsotropicSpectrum carrier = initial.spectrum();
    std::vector<double> spec_buf(nodes), last_spec;
    if (self) {
        on_step_start = [&](double, const std::vector<double>& state) {
            for (std::size_t i = 0; i < nodes; ++i) {
                spec_buf[i] = state[i * stride];
            }
            if (spec_buf == last_spec) return;
            const RateField field =
                rate_field(*provider.system, carrier.with_values(spec_buf),
                           grid, provider.quadrature, provider.threads);
            g = field.gamma;
            e = field.eta;
            last_spec = spec_buf;
        };
    }

    HierarchySolution sol;
    sol.times.push_back(0.0);
    sol.trajectory.push_back(initial);
    sol.theta.emplace_back(nodes, 0.0);
    if (max_order >= 2) sol.deviations.push_back(deviations(initial));

    auto on_checkpoint = [&](double t, const std::vector<double>& state) {
        std::vector<std::vector<double>> vals(
            order, std::vector<double>(nodes));
        std::vector<double> theta_row(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            for (std::size_t p = 1; p <= order; ++p) {
                double m = state[i * stride + p - 1];
                if (!self) {
                    // Reconstruction can graze below zero by roundoff of the
                    // equilibrium scale; moments are non-negative.
                    m = std::max(m + mstar[i * order + p - 1], 0.0);
                }
                vals[p - 1][i] = m;
            }
            theta_row[i] = state[i * stride + order];
        }
        MomentHierarchy h(grid, max_order, std::move(vals));
        sol.times.push_back(t);
        sol.theta.push_back(std::move(theta_row));
        if (max_order >= 2) sol.deviations.push_back(deviations(h));
        sol.trajectory.push_back(std::move(h));
    };

    integrate_ode(rhs, y, 0.0, checkpoints, admissible, on_step_start,
                  on_checkpoint, ode);
    return sol;
}

DeviationField deviations(const MomentHierarchy& hierarchy) {
    const auto& grid = hierarchy.grid();
    const int max_order = hierarchy.max_order();
    if (max_order < 2) {
        throw std::invalid_argument("deviation field needs max_order >= 2");
    }
    const auto& n = hierarchy.order(1);
    std::vector<std::vector<double>> vals(
        static_cast<std::size_t>(max_order - 1),
        std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(n[i] > 0.0)) {
            throw std::domain_error(
                "deviation field requires a positive mean spectrum");
        }
        double gp = n[i];
        for (int p = 2; p <= max_order; ++p) {
            gp *= p * n[i];
            require_finite_moment(gp);
            vals[p - 2][i] = hierarchy.order(p)[i] / gp - 1.0;
        }
    }
    return DeviationField(grid, max_order, std::move(vals));
}

std::vector<double> cumulant_q(const MomentHierarchy& hierarchy) {
    if (hierarchy.max_order() < 2) {
        throw std::invalid_argument("cumulant reading needs max_order >= 2");
    }
    const auto& n = hierarchy.order(1);
    const auto& m2 = hierarchy.order(2);
    std::vector<double> q(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        q[i] = m2[i] - 2.0 * n[i] * n[i];
    }
    return q;
}

std::vector<double> xi(const MomentHierarchy& hierarchy) {
    if (hierarchy.max_order() < 2) {
        throw std::invalid_argument(
            "waveaction deviation needs max_order >= 2");
    }
    const auto& n = hierarchy.order(1);
    const auto& m2 = hierarchy.order(2);
    std::vector<double> out(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double var = m2[i] - n[i] * n[i];
        if (var < 0.0) {
            if (var < -1e-12 * n[i] * n[i]) {
                throw NumericalError(
                    "second moment below the squared mean beyond roundoff");
            }
            out[i] = 0.0;
        } else {
            out[i] = std::sqrt(var);
        }
    }
    return out;
}

namespace {

void require_theta(double theta) {
    if (!(theta >= 0.0)) {
        throw std::domain_error("renormalized time must be non-negative");
    }
}

void require_table(const std::vector<double>& f0) {
    if (f0.empty() ||
        f0.size() > static_cast<std::size_t>(kMaxHierarchyOrder - 1)) {
        throw std::invalid_argument(
            "initial deviation table must cover p = 2..max_order");
    }
}

} // namespace

std::vector<double> exact_deviation_solution(const std::vector<double>& f0,
                                             double theta) {
    require_theta(theta);
    require_table(f0);
    if (theta == 0.0) return f0;
    const int max_order = static_cast<int>(f0.size()) + 1;
    const double log_em = log1mexp(theta); // log(1 - e^{-theta})
    std::vector<double> out(f0.size(), 0.0);
    for (int p = 2; p <= max_order; ++p) {
        double acc = 0.0;
        for (int j = 2; j <= p; ++j) {
            const double f = f0[static_cast<std::size_t>(j - 2)];
            if (f == 0.0) continue;
            // Log-space weight; each term is a Bernstein basis value in
            // e^{-theta}, so the weights live in [0, 1] and cannot overflow.
            double logw = -static_cast<double>(j) * theta +
                          log_binomial(p, j);
            if (j < p) logw += static_cast<double>(p - j) * log_em;
            acc += std::exp(logw) * f;
        }
        out[static_cast<std::size_t>(p - 2)] = acc;
    }
    return out;
}

std::vector<double> polynomial_closed_form(const std::vector<double>& f0,
                                           double theta) {
    require_theta(theta);
    require_table(f0);
    if (theta == 0.0) return f0;
    const int max_order = static_cast<int>(f0.size()) + 1;
    const double log_theta = std::log(theta);
    std::vector<double> out(f0.size(), 0.0);
    for (int p = 2; p <= max_order; ++p) {
        double acc = 0.0;
        for (int j = 2; j <= p; ++j) {
            const double f = f0[static_cast<std::size_t>(j - 2)];
            if (f == 0.0) continue;
            double logw = -static_cast<double>(p) * theta +
                          log_binomial(p, j);
            if (j < p) logw += static_cast<double>(p - j) * log_theta;
            acc += std::exp(logw) * f;
        }
        out[static_cast<std::size_t>(p - 2)] = acc;
    }
    return out;
}

double capillary_decay_rate(const PhysicalParams& params, double k,
                            double decay_constant) {
    params.validate();
    if (!(k > 0.0)) throw std::domain_error("wavenumber must be positive");
    if (!(decay_constant > 0.0)) {
        throw std::domain_error("decay constant must be positive");
    }
    return decay_constant * std::sqrt(params.energy_flux) *
           std::pow(params.surface_tension, 0.25) * std::pow(k, 0.75);
}

double xi_growth_curve(const PhysicalParams& params, double k, double t,
                       double decay_constant) {
    if (t < 0.0) throw std::domain_error("time must be non-negative");
    const double rate = capillary_decay_rate(params, k, decay_constant);
    const double n = params.spectrum_amplitude() * std::pow(k, -17.0 / 4.0);
    return n * n * -std::expm1(-2.0 * rate * t);
}

namespace {

struct BumpFit {
    double position = 0.0;
    double width = 0.0;
    double peak = 0.0;
    bool truncated = false;
};

// Parabolic vertex through the discrete maximum and its neighbors on the
// (generally non-uniform) abscissa, then half-maximum crossings by linear
// interpolation. `truncated` marks a maximum on the boundary or a missing
// crossing, where the numbers are edge-limited rather than bump properties.
BumpFit fit_bump(const std::vector<double>& x, const std::vector<double>& f) {
    std::size_t m = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i] > f[m]) m = i;
    }
    BumpFit out;
    out.position = x[m];
    out.peak = f[m];
    if (!(out.peak > 0.0)) {
        out.truncated = true;
        return out;
    }
    if (m == 0 || m + 1 == f.size()) {
        out.truncated = true;
    } else {
        const double a = x[m - 1], b = x[m], c = x[m + 1];
        const double fa = f[m - 1], fb = f[m], fc = f[m + 1];
        const double num =
            (b - a) * (b - a) * (fb - fc) - (b - c) * (b - c) * (fb - fa);
        const double den = (b - a) * (fb - fc) - (b - c) * (fb - fa);
        if (den > 0.0) {
            const double xs = b - 0.5 * num / den;
            if (xs > a && xs < c) {
                out.position = xs;
                out.peak = fa * (xs - b) * (xs - c) / ((a - b) * (a - c)) +
                           fb * (xs - a) * (xs - c) / ((b - a) * (b - c)) +
                           fc * (xs - a) * (xs - b) / ((c - a) * (c - b));
            }
        }
    }
    const double half = 0.5 * out.peak;
    double left = x.front();
    bool left_found = false;
    for (std::size_t i = m; i-- > 0;) {
        if (f[i] <= half && f[i + 1] > half) {
            left = x[i] +
                   (half - f[i]) * (x[i + 1] - x[i]) / (f[i + 1] - f[i]);
            left_found = true;
            break;
        }
    }
    double right = x.back();
    bool right_found = false;
    for (std::size_t i = m; i + 1 < f.size(); ++i) {
        if (f[i] > half && f[i + 1] <= half) {
            right = x[i] +
                    (f[i] - half) * (x[i + 1] - x[i]) / (f[i] - f[i + 1]);
            right_found = true;
            break;
        }
    }
    if (!left_found || !right_found) out.truncated = true;
    out.width = right - left;
    return out;
}

} // namespace

TransportReport transport_wave_diagnostic(const HierarchySolution& solution,
                                          std::size_t node) {
    if (solution.deviations.empty()) {
        throw std::invalid_argument(
            "transport diagnostic needs a deviation trajectory");
    }
    const int max_order = solution.trajectory.front().max_order();
    if (max_order < 4) {
        throw std::invalid_argument(
            "transport diagnostic needs max_order >= 4");
    }
    if (node >= solution.trajectory.front().grid().size()) {
        throw std::out_of_range("transport diagnostic node out of range");
    }

    std::vector<double> x(static_cast<std::size_t>(max_order - 1));
    for (int p = 2; p <= max_order; ++p) {
        x[static_cast<std::size_t>(p - 2)] =
            std::log(static_cast<double>(p));
    }

    TransportReport rep;
    std::vector<double> f(x.size());
    for (std::size_t c = 0; c < solution.deviations.size(); ++c) {
        for (int p = 2; p <= max_order; ++p) {
            f[static_cast<std::size_t>(p - 2)] =
                solution.deviations[c].order(p)[node];
        }
        const BumpFit fit = fit_bump(x, f);
        rep.theta.push_back(solution.theta[c][node]);
        rep.position.push_back(fit.position);
        rep.width.push_back(fit.width);
        rep.peak.push_back(fit.peak);
        rep.truncated = rep.truncated || fit.truncated;
    }

    // Fits are only meaningful once theta advances at the probed node;
    // otherwise (a theta = 0 snapshot) positions alone carry the report.
    const double count = static_cast<double>(rep.theta.size());
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    for (std::size_t c = 0; c < rep.theta.size(); ++c) {
        st += rep.theta[c];
        sx += rep.position[c];
        stt += rep.theta[c] * rep.theta[c];
        stx += rep.theta[c] * rep.position[c];
    }
    const double det = count * stt - st * st;
    if (det > 0.0) rep.speed = (count * stx - st * sx) / det;

    const double dtheta = rep.theta.back() - rep.theta.front();
    if (dtheta > 0.0 && rep.width.front() > 0.0 && rep.peak.front() > 0.0) {
        rep.width_growth = rep.width.back() / rep.width.front() - 1.0;
        rep.peak_decay_per_theta =
            (rep.peak.front() - rep.peak.back()) /
            (rep.peak.front() * dtheta);
    }
    return rep;
}

PdfProbe pdf_probe(double n, int p) {
    if (!(n > 0.0)) throw std::domain_error("mean waveaction must be positive");
    if (p < 1) throw std::invalid_argument("moment order must be >= 1");
    // The order-p moment integrand lambda^p e^{-lambda/n} peaks at p n with
    // an O(n) band: high orders read the far Rayleigh tail.
    return PdfProbe{static_cast<double>(p) * n, n};
}

double rayleigh_reference_density(double n, double lambda) {
    if (!(n > 0.0)) throw std::domain_error("mean waveaction must be positive");
    if (lambda < 0.0) {
        throw std::domain_error("waveaction level must be non-negative");
    }
    return std::exp(-lambda / n) / n;
}

} // namespace wavekin
