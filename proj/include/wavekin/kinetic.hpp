#pragma once

#include <vector>

#include "wavekin/core.hpp"
#include "wavekin/moments.hpp"
#include "wavekin/ode.hpp"
#include "wavekin/quadrature.hpp"
#include "wavekin/rates.hpp"

namespace wavekin {

// Net collision rate of change J(n_k) of the mean spectrum, evaluated on the
// same reduced-manifold quadrature as the rates but with its own spectrum
// combinations. Algebraically J = eta - gamma n; numerically the two routes
// differ at quadrature level, which consistency_check exploits.
double collision_term(const WaveSystem& system, const SpectrumFn& spectrum,
                      double k, const QuadratureControls& controls = {});
double collision_term(const WaveSystem& system,
                      const IsotropicSpectrum& spectrum, double k,
                      const QuadratureControls& controls = {});

// Per-node residual (eta_k - gamma_k n_k) - J(n_k): two independent
// quadrature routes to the same quantity, so the result should vanish
// within the combined error estimates. The spectrum must live on the same
// grid as the rate field.
std::vector<double> consistency_check(const WaveSystem& system,
                                      const RateField& rates,
                                      const IsotropicSpectrum& spectrum,
                                      const QuadratureControls& controls = {});

// Energy monitor E = trapezoid of omega(k) n(k) 2 pi k dk over the grid
// span. Reported as a diagnostic series along trajectories; the discretized
// dynamics does not exactly conserve the continuum invariant.
double spectral_energy(const WaveSystem& system,
                       const IsotropicSpectrum& spectrum);

struct KineticControls {
    RateMode mode = RateMode::self_consistent;
    OdeControls ode;
    std::vector<double> checkpoints; // empty selects {t_end}
    QuadratureControls quadrature;   // rate evaluation along the trajectory
    unsigned threads = 1;
};

struct SpectrumTrajectory {
    std::vector<double> times; // includes t = 0 first
    std::vector<IsotropicSpectrum> spectra;
    std::vector<double> energy; // monitor per checkpoint
};

// Mean-spectrum kinetic equation dn/dt = -gamma n + eta. This is exactly the
// order-1 row of the moment hierarchy and is integrated by the same
// machinery (evolve_hierarchy at max_order 1), so the two entry points agree
// bitwise under identical controls.
SpectrumTrajectory evolve_ke(const WaveSystem& system,
                             const IsotropicSpectrum& initial, double t_end,
                             const KineticControls& controls = {});

} // namespace wavekin
