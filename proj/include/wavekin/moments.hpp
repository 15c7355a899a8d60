#pragma once

#include <cstddef>
#include <vector>

#include "wavekin/core.hpp"
#include "wavekin/ode.hpp"
#include "wavekin/quadrature.hpp"
#include "wavekin/rates.hpp"

namespace wavekin {

// Standard literature value of the dimensionless decay-rate prefactor in
// gamma = constant * sqrt(flux) * sigma^{1/4} * k^{3/4}; the internally
// computed counterpart is dimensionless_rate_constant * kz_constant / 16pi.
inline constexpr double kLiteratureDecayConstant = 1.20;

// Hard cap on the hierarchy order: beyond this, p! n^p overflows double for
// order-one spectra and the moment representation is meaningless.
inline constexpr int kMaxHierarchyOrder = 170;

enum class InitKind { gaussian, deterministic };

// gaussian: M^(p) = p! n^p. deterministic: M^(p) = n^p (zero-fluctuation
// field; all waveaction in a single amplitude value).
MomentHierarchy init_hierarchy(const IsotropicSpectrum& spectrum,
                               int max_order, InitKind kind);

// Custom start: M^(p) = p! n^p (1 + F^(p)) from a deviation table
// f_table[p-2][i], p = 2..max_order. Entries below 1/p! - 1 would make a
// moment negative and are rejected.
MomentHierarchy init_hierarchy(const IsotropicSpectrum& spectrum,
                               int max_order,
                               const std::vector<std::vector<double>>& f_table);

enum class RateMode { self_consistent, frozen, frozen_stationary };

// Source of the (gamma, eta) pair along a trajectory.
//   frozen: gamma/eta fixed at the given field for the whole run.
//   frozen_stationary: gamma fixed, eta forced to gamma * n0 pointwise, so
//     the given spectrum is an exact equilibrium (the stationary-state
//     configuration every analytic comparison assumes).
//   self_consistent: gamma/eta recomputed from the current spectrum at the
//     start of every attempted step.
struct RateProvider {
    RateMode mode = RateMode::frozen;
    std::vector<double> gamma;
    std::vector<double> eta;
    std::vector<double> n_eq; // equilibrium spectrum (frozen_stationary only)

    const WaveSystem* system = nullptr; // self_consistent only; not owned
    QuadratureControls quadrature;      // self_consistent only
    unsigned threads = 1;               // self_consistent rate recomputation

    static RateProvider frozen(const RateField& field);
    static RateProvider frozen_stationary(const RateField& field,
                                          const IsotropicSpectrum& n0);
    static RateProvider self_consistent(const WaveSystem& system,
                                        const QuadratureControls& controls,
                                        unsigned threads = 1);
};

struct HierarchyControls {
    OdeControls ode;
    // Checkpoint times (strictly increasing, > 0). Empty selects {t_end}.
    std::vector<double> checkpoints;
};

struct HierarchySolution {
    std::vector<double> times;                    // includes t = 0 first
    std::vector<std::vector<double>> theta;       // [checkpoint][node]
    std::vector<MomentHierarchy> trajectory;      // one per checkpoint
    std::vector<DeviationField> deviations;       // empty when max_order < 2
};

// Integrates dM^(p)/dt = -p gamma M^(p) + p^2 eta M^(p-1) for p = 1..P per
// node, with the renormalized time theta = integral of eta/n accumulated as
// an augmented state component per node. The p = 1 row is the mean-spectrum
// kinetic equation. In the frozen modes the stepper advances the deviation
// from the rates' equilibrium hierarchy (an exact affine reparameterization
// of the same linear system) so the error controller tracks the physically
// meaningful departure rather than the large Gaussian baseline.
HierarchySolution evolve_hierarchy(const RateProvider& provider,
                                   const MomentHierarchy& initial,
                                   double t_end,
                                   const HierarchyControls& controls);

// Relative deviations F^(p) = (M^(p) - p! n^p) / (p! n^p) for p >= 2.
DeviationField deviations(const MomentHierarchy& hierarchy);

// Cumulant reading Q = M^(2) - 2 n^2 per node (zero for Gaussian fields).
std::vector<double> cumulant_q(const MomentHierarchy& hierarchy);

// Waveaction standard deviation xi = sqrt(M^(2) - n^2) per node. Values of
// M^(2) below n^2 beyond a roundoff allowance are an unphysical state and
// throw; within the allowance xi clamps to zero.
std::vector<double> xi(const MomentHierarchy& hierarchy);

// Exact solution of dF^(p)/d theta = p (F^(p-1) - F^(p)), F^(1) = 0, as a
// binomial combination of e^{-j theta}: F^(p)(theta) =
// sum_{j=2..p} C(p,j) e^{-j theta} (1 - e^{-theta})^{p-j} F0^(j).
// f0[j-2] holds F^(j)(0); the result uses the same indexing.
std::vector<double> exact_deviation_solution(const std::vector<double>& f0,
                                             double theta);

// The theta-polynomial closed form F^(p)(theta) =
// e^{-p theta} sum_{j=2..p} theta^{p-j} p!/(j!(p-j)!) F0^(j). Exact at p = 2
// and to first order in theta for all p; at finite theta and p >= 3 it is an
// asymptotic form that deviates from exact_deviation_solution at O(theta^2)
// (about 4.9% relative at p = 3, theta = 0.1).
std::vector<double> polynomial_closed_form(const std::vector<double>& f0,
                                           double theta);

// Decay rate gamma = decay_constant * sqrt(flux) * sigma^{1/4} * k^{3/4}.
// Pass kLiteratureDecayConstant or the internally computed value.
double capillary_decay_rate(const PhysicalParams& params, double k,
                            double decay_constant);

// Fluctuation growth from a deterministic (zero-fluctuation) start on the
// stationary spectrum: returns xi^2(k, t) = A^2 k^{-17/2} (1 - e^{-2 gamma_k t}).
double xi_growth_curve(const PhysicalParams& params, double k, double t,
                       double decay_constant);

struct TransportReport {
    std::vector<double> theta;    // theta at the probed node per checkpoint
    std::vector<double> position; // argmax of F over x = ln p (interpolated)
    std::vector<double> width;    // full width at half maximum in x
    std::vector<double> peak;     // F at the interpolated argmax
    double speed = 0.0;           // least-squares d(position)/d(theta)
    double width_growth = 0.0;    // width[last]/width[first] - 1
    double peak_decay_per_theta = 0.0; // fractional peak loss per unit theta
    bool truncated = false;       // bump touched the p boundary
};

// Tracks a deviation bump across orders p at one grid node. The fitted
// quantities (speed, width growth, peak decay) stay zero unless theta
// advances at that node; positions and widths are reported regardless.
TransportReport transport_wave_diagnostic(const HierarchySolution& solution,
                                          std::size_t node);

struct PdfProbe {
    double lambda; // p * n, where the order-p moment weights the amplitude PDF
    double width;  // characteristic width of the probed band, ~ n
};

PdfProbe pdf_probe(double n, int p);

// Rayleigh reference density of the waveaction, exp(-lambda/n)/n.
double rayleigh_reference_density(double n, double lambda);

} // namespace wavekin
