#include "wavekin/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

constexpr std::size_t kMinOracleSamples = 10000;

void require_samples(std::size_t samples) {
    if (samples < kMinOracleSamples) {
        throw std::invalid_argument(
            "Monte-Carlo oracle needs at least 10^4 samples");
    }
}

// Accumulates a plain-MC mean with a running sum of squares for the
// standard error of the mean.
struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }

    double mean() const { return sum / static_cast<double>(count); }

    double std_error() const {
        const double m = static_cast<double>(count);
        const double mu = sum / m;
        const double var = std::max(sum_sq / m - mu * mu, 0.0);
        return std::sqrt(var / (m - 1.0));
    }
};

} // namespace

AngularOracleReport mc_angular_oracle(double k, double k1, double k2,
                                      std::size_t samples,
                                      std::uint64_t seed) {
    if (!(k > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) {
        throw std::domain_error("triad side lengths must be positive");
    }
    require_samples(samples);

    const double eps = 1e-3 * std::min({k, k1, k2});
    const double full_weight = 1.0 / (2.0 * eps * k2);
    const double half_weight = 1.0 / (eps * k2);

    // Stratify the angle so the crossing bands cannot wander between runs of
    // different luck; a few hundred draws per stratum keeps the per-stratum
    // variance estimates (and hence the reported standard error) solid.
    const std::size_t strata = 4096;
    const double width = 2.0 * kPi / static_cast<double>(strata);
    const std::size_t base = samples / strata;
    const std::size_t extra = samples % strata;

    RngStream rng = RngStream::derive(seed, 0);

    double sum_full = 0.0, var_full = 0.0;
    double sum_half = 0.0, var_half = 0.0;
    for (std::size_t s = 0; s < strata; ++s) {
        const std::size_t m = base + (s < extra ? 1 : 0);
        const double lo = static_cast<double>(s) * width;
        double sf = 0.0, sf2 = 0.0, sh = 0.0, sh2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double theta = lo + width * rng.uniform();
            const double w2 =
                k * k + k1 * k1 - 2.0 * k * k1 * std::cos(theta);
            const double g = std::sqrt(std::max(w2, 0.0)) - k2;
            const double f = std::abs(g) < eps ? full_weight : 0.0;
            const double h = std::abs(g) < 0.5 * eps ? half_weight : 0.0;
            sf += f;
            sf2 += f * f;
            sh += h;
            sh2 += h * h;
        }
        const double md = static_cast<double>(m);
        sum_full += sf / md;
        sum_half += sh / md;
        if (m >= 2) {
            const double vf =
                std::max(sf2 / md - (sf / md) * (sf / md), 0.0);
            const double vh =
                std::max(sh2 / md - (sh / md) * (sh / md), 0.0);
            var_full += vf / (md - 1.0);
            var_half += vh / (md - 1.0);
        }
    }

    AngularOracleReport rep;
    rep.coarse_estimate = width * sum_full;
    rep.estimate = width * sum_half;
    rep.coarse_std_error = width * std::sqrt(var_full);
    rep.std_error = width * std::sqrt(var_half);
    const double shift = std::abs(rep.estimate - rep.coarse_estimate);
    const double budget =
        std::max(3.0 * (rep.std_error + rep.coarse_std_error),
                 1e-3 * (std::abs(rep.estimate) +
                         std::abs(rep.coarse_estimate)));
    rep.converged = shift <= budget;
    return rep;
}

McRateReport mc_rate_oracle(const WaveSystem& system,
                            const SpectrumFn& spectrum, double k,
                            double k1_max, std::size_t samples,
                            std::uint64_t seed) {
    if (!(k > 0.0)) throw std::domain_error("wavenumber must be positive");
    if (!(k1_max > 0.0)) {
        throw std::domain_error("growth-branch cutoff must be positive");
    }
    require_samples(samples);

    const double omega_k = system.dispersion(k);
    const double eps = 1e-3 * omega_k;
    const double delta_weight = 1.0 / (2.0 * eps);

    Accumulator dec_gamma, dec_eta, grow_gamma, grow_eta;

    // Decay branch: k2 = |k_vec - k1_vec|; resonance needs omega(k1) <
    // omega(k), so k1 < k for monotone dispersion.
    {
        RngStream rng = RngStream::derive(seed, 1);
        const double r_max = k;
        const double measure = r_max * 2.0 * kPi; // uniform (r, theta) box
        for (std::size_t i = 0; i < samples; ++i) {
            const double r = r_max * rng.uniform();
            const double theta = 2.0 * kPi * rng.uniform();
            const double k2_sq =
                k * k + r * r - 2.0 * k * r * std::cos(theta);
            const double k2 = std::sqrt(std::max(k2_sq, 0.0));
            double g = 0.0, e = 0.0;
            if (k2 > 0.0 && r > 0.0) {
                const double dw =
                    omega_k - system.dispersion(r) - system.dispersion(k2);
                if (std::abs(dw) < eps) {
                    const double v = system.vertex(k, r, k2);
                    const double base = measure * r * v * v * delta_weight;
                    const double n1 = spectrum(r);
                    const double n2 = spectrum(k2);
                    g = base * n2;
                    e = base * n1 * n2;
                }
            }
            dec_gamma.add(g);
            dec_eta.add(e);
        }
    }

    // Growth branch: k2 = |k_vec + k1_vec|; resonance omega(k2) = omega(k) +
    // omega(k1) has a crossing for every k1, truncated at k1_max.
    {
        RngStream rng = RngStream::derive(seed, 2);
        const double measure = k1_max * 2.0 * kPi;
        for (std::size_t i = 0; i < samples; ++i) {
            const double r = k1_max * rng.uniform();
            const double theta = 2.0 * kPi * rng.uniform();
            const double k2_sq =
                k * k + r * r + 2.0 * k * r * std::cos(theta);
            const double k2 = std::sqrt(std::max(k2_sq, 0.0));
            double g = 0.0, e = 0.0;
            if (k2 > 0.0 && r > 0.0) {
                const double dw =
                    system.dispersion(k2) - omega_k - system.dispersion(r);
                if (std::abs(dw) < eps) {
                    const double v = system.vertex(k2, k, r);
                    const double base = measure * r * v * v * delta_weight;
                    const double n1 = spectrum(r);
                    const double n2 = spectrum(k2);
                    g = base * (n1 - n2);
                    e = base * 2.0 * n1 * n2;
                }
            }
            grow_gamma.add(g);
            grow_eta.add(e);
        }
    }

    const double eps2 = system.epsilon * system.epsilon;
    const double gamma_pref = 8.0 * kPi * eps2;
    const double eta_pref = 4.0 * kPi * eps2;

    McRateReport rep;
    rep.gamma = gamma_pref * (dec_gamma.mean() + grow_gamma.mean());
    rep.gamma_std_error =
        gamma_pref * std::hypot(dec_gamma.std_error(),
                                grow_gamma.std_error());
    rep.eta = eta_pref * (dec_eta.mean() + grow_eta.mean());
    rep.eta_std_error =
        eta_pref * std::hypot(dec_eta.std_error(), grow_eta.std_error());
    return rep;
}

} // namespace wavekin
