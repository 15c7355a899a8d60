#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavekin {

// omega = prefactor * k^exponent; set when the dispersion is an exact power
// law, which unlocks closed-form resonance roots and the stable rate kernels.
struct PowerLawDispersion {
    double prefactor;
    double exponent;
};

// How the interaction coefficient is evaluated inside the rate quadrature.
// The public `vertex` callable is always available for point evaluation, but
// the quadrature needs to know the analytic family to use cancellation-free
// factored forms near the edges of the resonant manifold.
enum class VertexKind { capillary, unit, custom };

struct WaveSystem {
    std::string name;
    std::function<double(double)> dispersion;             // omega(k)
    std::function<double(double)> dispersion_derivative;  // d omega / dk
    std::function<double(double, double, double)> vertex; // V(k, k1, k2)
    double vertex_homogeneity = 0.0; // V(l k, l k1, l k2) = l^m V(k, k1, k2)
    int dimension = 2;
    double epsilon = 1.0;            // formal nonlinearity parameter
    std::optional<PowerLawDispersion> power_law;
    VertexKind vertex_kind = VertexKind::custom;
    double vertex_prefactor = 1.0;   // kappa multiplying the capillary kernel
};

struct PhysicalParams {
    double surface_tension = 1.0; // sigma
    double density = 1.0;         // rho
    double energy_flux = 1.0;     // P, flux toward high k
    double kz_constant = 13.98;   // C, dimensionless spectrum prefactor

    void validate() const;
    // A = sqrt(P) rho^{3/2} C / sigma^{1/4}, the k^{-17/4} spectrum amplitude.
    double spectrum_amplitude() const;
};

// Radial spectrum on a strictly increasing grid. Off-node evaluation is
// linear in log-log coordinates (exact on power laws); outside the grid the
// spectrum continues as a power law whose exponent is fitted to the edge
// decade of nodes. Zero or negative node values force plain linear
// interpolation on the affected interval and zero extrapolation.
class IsotropicSpectrum {
public:
    IsotropicSpectrum(std::vector<double> grid, std::vector<double> values);

    double operator()(double k) const;

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double low_edge_exponent() const { return lo_slope_; }
    double high_edge_exponent() const { return hi_slope_; }

    IsotropicSpectrum with_values(std::vector<double> values) const {
        return IsotropicSpectrum(grid_, std::move(values));
    }

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    double lo_slope_ = 0.0; // d log n / d log k fitted at the low edge
    double hi_slope_ = 0.0;
};

// M[p][i] = <|a|^{2p}> at grid node i, p = 1..max_order. The p = 1 slice is
// the spectrum. Entries must be non-negative; violations of moment
// log-convexity (M^(p) M^(p-2) >= (M^(p-1))^2) are flagged, not fatal,
// because roundoff can graze the boundary.
class MomentHierarchy {
public:
    MomentHierarchy(std::vector<double> grid, int max_order,
                    std::vector<std::vector<double>> values);

    int max_order() const { return max_order_; }
    const std::vector<double>& grid() const { return grid_; }
    // 1-based in p: order(1) is the spectrum row.
    const std::vector<double>& order(int p) const;
    std::vector<std::vector<double>>& raw() { return values_; }
    const std::vector<std::vector<double>>& raw() const { return values_; }

    IsotropicSpectrum spectrum() const;

    // Indices (p, i) where log-convexity fails beyond roundoff tolerance.
    std::vector<std::pair<int, std::size_t>> convexity_violations(
        double rel_tol = 1e-9) const;

private:
    std::vector<double> grid_;
    int max_order_;
    std::vector<std::vector<double>> values_; // [p-1][i]
};

// F[p][i] = (M^(p) - p! n^p) / (p! n^p) for p = 2..max_order.
class DeviationField {
public:
    DeviationField(std::vector<double> grid, int max_order,
                   std::vector<std::vector<double>> values);

    int max_order() const { return max_order_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& order(int p) const; // p = 2..max_order

    static double lower_bound(int p); // 1/p! - 1, forced by M >= 0

private:
    std::vector<double> grid_;
    int max_order_;
    std::vector<std::vector<double>> values_; // [p-2][i]
};

struct RateField {
    std::vector<double> grid;
    std::vector<double> gamma;      // decay rate, 1/time
    std::vector<double> eta;        // forcing, waveaction/time
    std::vector<double> gamma_err;  // relative quadrature error estimates
    std::vector<double> eta_err;

    void validate() const;
};

// ---- built-in systems ------------------------------------------------------

// Deep-water capillary waves: omega = sqrt(sigma/rho) k^{3/2}, d = 2.
// The vertex prefactor is calibrated so that the dimensionless decay constant
// of the k^{-17/4} stationary spectrum equals the standard value 4.30 (see
// dimensionless_rate_constant in rates.hpp and README "Normalization").
WaveSystem capillary_system(double sigma, double rho);

// Dispersive test system for Monte-Carlo cross-checks: omega = k^{3/2},
// V = 1, d = 2. Rates on it are finite and independently verifiable.
WaveSystem toy_system();

// omega = k, V = 1. Useful for resonant-partner demonstrations; its resonant
// manifold is collinear (triangle factor vanishes identically on resonance),
// so reduced rate integrals on it are rejected as degenerate.
WaveSystem linear_dispersion_system();

// ---- built-in spectra ------------------------------------------------------

// n(k) = A k^{-17/4} with A from params.
IsotropicSpectrum zf_spectrum(const PhysicalParams& params,
                              const std::vector<double>& grid);

// Equipartition spectrum n(k) = T / omega(k); makes the collision kernel
// vanish pointwise on every resonant triad.
IsotropicSpectrum rayleigh_jeans_spectrum(const WaveSystem& system,
                                          double temperature,
                                          const std::vector<double>& grid);

IsotropicSpectrum power_law_spectrum(double amplitude, double exponent,
                                     const std::vector<double>& grid);

// Geometric grid with `nodes` points spanning [k_min, k_max].
std::vector<double> geometric_grid(double k_min, double k_max,
                                   std::size_t nodes);

} // namespace wavekin
