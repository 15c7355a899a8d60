#pragma once

#include <functional>
#include <vector>

#include "wavekin/core.hpp"
#include "wavekin/quadrature.hpp"

namespace wavekin {

// Radial spectrum as a callable; used for analytic spectra (exact power laws,
// equipartition) where grid interpolation would only add noise.
using SpectrumFn = std::function<double(double)>;

struct RateSample {
    double gamma;     // decay rate
    double eta;       // forcing
    double gamma_err; // relative quadrature error estimates
    double eta_err;
};

// Decay/forcing coefficients of the moment hierarchy at one wavenumber,
// computed by reducing the double wavevector integral over the resonant
// manifold to 1D quadrature: the angular average of the momentum delta gives
// the 2/S weight, the frequency delta is eliminated against k2, and the
// remaining k1 integral is evaluated adaptively with endpoint substitutions
// that absorb the integrable boundary singularities. Requires a power-law
// dispersion with exponent > 1 (a collinear resonant manifold at exponent 1
// makes the reduction degenerate).
RateSample rates_at(const WaveSystem& system, const SpectrumFn& spectrum,
                    double k, const QuadratureControls& controls = {});
RateSample rates_at(const WaveSystem& system,
                    const IsotropicSpectrum& spectrum, double k,
                    const QuadratureControls& controls = {});

// Forcing coefficient eta(k) >= 0 for non-negative spectra.
double eta(const WaveSystem& system, const IsotropicSpectrum& spectrum,
           double k, const QuadratureControls& controls = {});

// Decay coefficient gamma(k).
double gamma(const WaveSystem& system, const IsotropicSpectrum& spectrum,
             double k, const QuadratureControls& controls = {});

// Per-node rates over a grid; nodes are independent and are distributed over
// `threads` contiguous blocks. Thread count never changes the computed bytes.
// A node failure is rethrown with the node index and wavenumber attached.
RateField rate_field(const WaveSystem& system,
                     const IsotropicSpectrum& spectrum,
                     const std::vector<double>& grid,
                     const QuadratureControls& controls = {},
                     unsigned threads = 1);

// The pair of reduced 1D integrals over the two resonance branches with a
// caller-supplied spectrum combination f(k1, k2) per branch: the shared
// quadrature surface beneath the rate and collision-term integrals. The
// decay branch solves omega(k) = omega(k1) + omega(k2); the growth branch
// solves omega(k2) = omega(k) + omega(k1). No 4pi/8pi prefactors or epsilon
// factors are applied here.
struct ManifoldIntegrals {
    double decay;
    double growth;
    double decay_abserr;
    double growth_abserr;
};

ManifoldIntegrals reduced_manifold_integrals(
    const WaveSystem& system, double k,
    const std::function<double(double, double)>& decay_comb,
    const std::function<double(double, double)>& growth_comb,
    const QuadratureControls& controls = {});

struct RateConstantReport {
    double value;     // the dimensionless decay constant I
    double rel_error; // quadrature error estimate
};

// Dimensionless decay constant of the stationary constant-flux spectrum:
// with n = k^{-x}, x = vertex_homogeneity + dimension, the decay rate obeys
// gamma(k) = (I/16pi) * A * (dimensional prefactors) * k^{x - dimension + ...}
// and I is extracted at k = 1. For the capillary family the constant is
// evaluated on the unit-material twin system (it is independent of the
// material parameters by construction). Requires a scale-invariant system.
RateConstantReport dimensionless_rate_constant(
    const WaveSystem& system, const QuadratureControls& controls = {});

} // namespace wavekin
