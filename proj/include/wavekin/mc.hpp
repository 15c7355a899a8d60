#pragma once

#include <cstddef>
#include <cstdint>

#include "wavekin/core.hpp"
#include "wavekin/rates.hpp"

namespace wavekin {

// Monte-Carlo verification oracles. These deliberately avoid every analytic
// reduction used by the production quadrature (no triangle factor, no
// root-solved frequency delta): they sample raw angles/wavevectors against
// mollified deltas, so agreement with the reduced routes validates the
// reductions *including their constant factors*. Validation-only: never used
// inside production integrals.

struct AngularOracleReport {
    double estimate;        // finer (half-width) mollifier estimate
    double std_error;       // standard error of `estimate`
    double coarse_estimate; // full-width mollifier estimate
    double coarse_std_error;
    bool converged;         // width-halving shift within the error budget
};

// Estimates the reduced angular integral of the 2D momentum delta at fixed
// side lengths, i.e. the quantity angular_weight computes as 2/S. One angle
// is integrated out exactly (the delta pins it, contributing 1/k2); the
// remaining angle is sampled with paired stratified draws and a top-hat
// mollifier of width 1e-3 * min side, rechecked at half width. Degenerate
// triads (S -> 0) make the target divergent, which surfaces as a failed
// width-halving check: `converged` is false.
AngularOracleReport mc_angular_oracle(double k, double k1, double k2,
                                      std::size_t samples,
                                      std::uint64_t seed);

struct McRateReport {
    double gamma;
    double gamma_std_error;
    double eta;
    double eta_std_error;
};

// Brute-force estimate of (gamma, eta) at one wavenumber: the momentum delta
// eliminates k2 vectorially and the remaining d^2 k1 integral is sampled in
// polar coordinates with a mollified frequency delta on each resonance
// branch. The growth branch is truncated at |k1| = k1_max, which must be
// chosen so the spectrum tail beyond it is negligible. Mollifier width is
// 1e-3 * omega(k); its O(width^2) bias sits far below the statistical error
// at any practical sample count.
McRateReport mc_rate_oracle(const WaveSystem& system,
                            const SpectrumFn& spectrum, double k,
                            double k1_max, std::size_t samples,
                            std::uint64_t seed);

} // namespace wavekin
