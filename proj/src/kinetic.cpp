#include "wavekin/kinetic.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

double collision_impl(const WaveSystem& system, const SpectrumFn& n_of,
                      double k, const QuadratureControls& controls) {
    const double nk = n_of(k);
    const auto decay_comb = [&](double k1, double k2) {
        const double n1 = n_of(k1);
        const double n2 = n_of(k2);
        return n1 * n2 - nk * (n1 + n2);
    };
    const auto growth_comb = [&](double k1, double k2) {
        const double n1 = n_of(k1);
        const double n2 = n_of(k2);
        return nk * n1 - n2 * (nk + n1);
    };
    const ManifoldIntegrals parts =
        reduced_manifold_integrals(system, k, decay_comb, growth_comb,
                                   controls);
    const double eps2 = system.epsilon * system.epsilon;
    return eps2 * (4.0 * kPi * parts.decay - 8.0 * kPi * parts.growth);
}

} // namespace

double collision_term(const WaveSystem& system, const SpectrumFn& spectrum,
                      double k, const QuadratureControls& controls) {
    return collision_impl(system, spectrum, k, controls);
}

double collision_term(const WaveSystem& system,
                      const IsotropicSpectrum& spectrum, double k,
                      const QuadratureControls& controls) {
    return collision_impl(
        system, [&spectrum](double q) { return spectrum(q); }, k, controls);
}

std::vector<double> consistency_check(const WaveSystem& system,
                                      const RateField& rates,
                                      const IsotropicSpectrum& spectrum,
                                      const QuadratureControls& controls) {
    rates.validate();
    if (spectrum.grid() != rates.grid) {
        throw std::invalid_argument(
            "consistency check needs the spectrum and rates on one grid");
    }
    std::vector<double> residual(rates.grid.size());
    for (std::size_t i = 0; i < rates.grid.size(); ++i) {
        const double linear =
            rates.eta[i] - rates.gamma[i] * spectrum.values()[i];
        residual[i] =
            linear - collision_term(system, spectrum, rates.grid[i], controls);
    }
    return residual;
}

double spectral_energy(const WaveSystem& system,
                       const IsotropicSpectrum& spectrum) {
    const auto& ks = spectrum.grid();
    const auto& ns = spectrum.values();
    double total = 0.0;
    // Isotropic 2D measure: d^2k = 2 pi k dk.
    double prev = system.dispersion(ks[0]) * ns[0] * 2.0 * kPi * ks[0];
    for (std::size_t i = 1; i < ks.size(); ++i) {
        const double cur =
            system.dispersion(ks[i]) * ns[i] * 2.0 * kPi * ks[i];
        total += 0.5 * (prev + cur) * (ks[i] - ks[i - 1]);
        prev = cur;
    }
    return total;
}

SpectrumTrajectory evolve_ke(const WaveSystem& system,
                             const IsotropicSpectrum& initial, double t_end,
                             const KineticControls& controls) {
    RateProvider provider;
    switch (controls.mode) {
    case RateMode::self_consistent:
        provider = RateProvider::self_consistent(system, controls.quadrature,
                                                 controls.threads);
        break;
    case RateMode::frozen:
        provider = RateProvider::frozen(
            rate_field(system, initial, initial.grid(), controls.quadrature,
                       controls.threads));
        break;
    case RateMode::frozen_stationary:
        provider = RateProvider::frozen_stationary(
            rate_field(system, initial, initial.grid(), controls.quadrature,
                       controls.threads),
            initial);
        break;
    }

    const MomentHierarchy start =
        init_hierarchy(initial, 1, InitKind::gaussian);
    HierarchyControls hc;
    hc.ode = controls.ode;
    hc.checkpoints = controls.checkpoints;
    const HierarchySolution sol =
        evolve_hierarchy(provider, start, t_end, hc);

    SpectrumTrajectory out;
    out.times = sol.times;
    out.spectra.reserve(sol.trajectory.size());
    out.energy.reserve(sol.trajectory.size());
    for (const MomentHierarchy& h : sol.trajectory) {
        IsotropicSpectrum s = h.spectrum();
        out.energy.push_back(spectral_energy(system, s));
        out.spectra.push_back(std::move(s));
    }
    return out;
}

} // namespace wavekin
