#include "wavekin/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

// The reduced 1D integrands live on the two resonance branches
//   decay:  omega(k)  = omega(k1) + omega(k2),  k1 in (0, k)
//   growth: omega(k2) = omega(k)  + omega(k1),  k1 in (0, inf)
// For a power-law dispersion omega = c k^alpha the partner k2 is closed-form.
// Every difference entering the triangle factors and the interaction kernel
// is evaluated from the substitution variables through expm1/log1p, so the
// integrand stays accurate to a few ulp across the whole manifold, including
// the corners k1 -> 0 and k1 -> k where naive evaluation loses all digits.
//
// Factor naming: for a triangle with "sides" (q, p, r) the quantity
// f_x = (sum of the other two sides) - x appears both in the stable area
// formula S = 1/2 sqrt(per * f_q * f_p * f_r) and in the capillary kernel
// via q^2 - (p - r)^2 = f_p * f_r etc., which is why the kernel is evaluated
// from the same exact factors instead of from its textbook form.

struct KernelPoint {
    double k2;
    double weight; // W * V^2 with W = 2 k1 k2 / (S * omega'(k2))
};

class ReducedKernel {
public:
    explicit ReducedKernel(const WaveSystem& system)
        : alpha_(0.0), c_(0.0), kind_(system.vertex_kind),
          prefactor_(system.vertex_prefactor), vertex_(&system.vertex) {
        if (!system.power_law) {
            throw std::invalid_argument(
                "reduced rate quadrature requires a power-law dispersion");
        }
        alpha_ = system.power_law->exponent;
        c_ = system.power_law->prefactor;
        if (!(alpha_ > 1.01)) {
            throw std::invalid_argument(
                "reduced rate quadrature: dispersion exponent too close to 1 "
                "(collinear resonant manifold is degenerate)");
        }
    }

    // Decay branch point. `delta` = k - k1 must be supplied exactly by the
    // caller (it is the substitution variable near the k1 -> k endpoint).
    std::optional<KernelPoint> decay_point(double k, double k1,
                                           double delta) const {
        if (!(k1 > 0.0) || !(delta > 0.0)) return std::nullopt;
        const double t = k1 / k;
        double log_ratio; // log(k2 / k) * alpha = log(1 - t^alpha)
        if (k1 <= 0.5 * k) {
            log_ratio = std::log1p(-std::exp(alpha_ * std::log(t)));
        } else {
            log_ratio =
                std::log(-std::expm1(alpha_ * std::log1p(-delta / k)));
        }
        const double k2 = k * std::exp(log_ratio / alpha_);
        const double d = -k * std::expm1(log_ratio / alpha_); // k - k2, exact
        double f_q; // k1 + k2 - k
        if (k1 <= 0.5 * k) {
            f_q = k1 - d;
        } else {
            f_q = k2 - delta;
        }
        if (!(f_q > 0.0)) return std::nullopt;
        const double f_p = delta + k2; // k + k2 - k1
        const double f_r = k1 + d;     // k + k1 - k2
        const double per = k + (k1 + k2);
        return finish(k, k1, k2, /*q=*/k, /*p=*/k1, /*r=*/k2, f_q, f_p, f_r,
                      per);
    }

    // Growth branch point; valid for any k1 > 0.
    std::optional<KernelPoint> growth_point(double k, double k1) const {
        if (!(k1 > 0.0)) return std::nullopt;
        const double t = k1 / k;
        const double w = std::exp(alpha_ * std::log(t)); // t^alpha
        const double g = k * std::expm1(std::log1p(w) / alpha_); // k2 - k
        const double k2 = k + g;
        double f_q; // k + k1 - k2
        double f_r; // k + k2 - k1
        if (k1 <= 0.5 * k) {
            f_q = k1 - g;
            f_r = k2 + (k - k1);
        } else {
            // e = k2 - k1, assembled without cancellation; e/k stays well
            // below 1 on this side, so f_q = k - e keeps most of its digits.
            const double e =
                (k1 <= k) ? (k - k1) + g
                          : k1 * std::expm1(
                                std::log1p(std::exp(-alpha_ * std::log(t))) /
                                alpha_);
            f_q = k - e;
            f_r = e + k;
        }
        if (!(f_q > 0.0)) return std::nullopt;
        const double f_p = g + k1; // k2 + k1 - k
        const double per = k2 + (k + k1);
        return finish(k, k1, k2, /*q=*/k2, /*p=*/k, /*r=*/k1, f_q, f_p, f_r,
                      per);
    }

private:
    std::optional<KernelPoint> finish(double /*k*/, double k1, double k2,
                                      double q, double p, double r,
                                      double f_q, double f_p, double f_r,
                                      double per) const {
        const double s = 0.5 * std::sqrt(per * f_q * f_p * f_r);
        if (!(s > 0.0)) return std::nullopt;
        const double omega_prime = c_ * alpha_ * std::pow(k2, alpha_ - 1.0);
        const double w = 2.0 * k1 * k2 / (s * omega_prime);
        return KernelPoint{k2, w * vertex_sq(q, p, r, f_q, f_p, f_r)};
    }

    double vertex_sq(double q, double p, double r, double f_q, double f_p,
                     double f_r) const {
        switch (kind_) {
        case VertexKind::unit:
            return prefactor_ * prefactor_;
        case VertexKind::capillary: {
            const double g =
                f_p * f_r * std::pow(p * r, 0.25) / std::pow(q, 0.25) -
                f_q * f_r * std::pow(q * r, 0.25) / std::pow(p, 0.25) -
                f_q * f_p * std::pow(p * q, 0.25) / std::pow(r, 0.25);
            const double v = prefactor_ * g;
            return v * v;
        }
        case VertexKind::custom: {
            const double v = (*vertex_)(q, p, r);
            return v * v;
        }
        }
        return 0.0;
    }

    double alpha_;
    double c_;
    VertexKind kind_;
    double prefactor_;
    const std::function<double(double, double, double)>* vertex_;
};

using Combination = std::function<double(double, double)>; // f(k1, k2)

struct BranchIntegrals {
    double decay = 0.0;
    double growth = 0.0;
    double decay_abserr = 0.0;
    double growth_abserr = 0.0;
};

QuadratureResult piece(const std::function<double(double)>& f,
                       const QuadratureControls& controls, double k,
                       const char* label) {
    try {
        return integrate(f, 0.0, 1.0, controls);
    } catch (const NumericalError& e) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "reduced rate quadrature (%s, k=%.6g): %s", label, k,
                      e.what());
        throw NumericalError(buf);
    }
}

// The endpoint substitutions absorb the integrable singularities:
//   k1 = (k/2) u^4 flattens the k1 -> 0 corner (spectrum and 1/S blowups),
//   k - k1 = (k/2) v^6 flattens the k2 -> 0 corner on the decay branch,
//   k1 = (k/2) / s^4 maps the growth-branch tail onto a compact interval,
// so no explicit cutoff or truncation is ever applied.
BranchIntegrals reduced_integrals(const ReducedKernel& kernel, double k,
                                  const Combination& decay_comb,
                                  const Combination& growth_comb,
                                  const QuadratureControls& controls) {
    const double h = 0.5 * k;
    BranchIntegrals out;

    const auto decay_lo = [&](double u) {
        const double u2 = u * u;
        const double k1 = h * u2 * u2;
        const auto pt = kernel.decay_point(k, k1, k - k1);
        if (!pt) return 0.0;
        return pt->weight * decay_comb(k1, pt->k2) * 4.0 * h * u2 * u;
    };
    const auto decay_hi = [&](double v) {
        const double v2 = v * v;
        const double delta = h * v2 * v2 * v2;
        const double k1 = k - delta;
        const auto pt = kernel.decay_point(k, k1, delta);
        if (!pt) return 0.0;
        return pt->weight * decay_comb(k1, pt->k2) * 6.0 * h * v2 * v2 * v;
    };
    const auto growth_lo = [&](double u) {
        const double u2 = u * u;
        const double k1 = h * u2 * u2;
        const auto pt = kernel.growth_point(k, k1);
        if (!pt) return 0.0;
        return pt->weight * growth_comb(k1, pt->k2) * 4.0 * h * u2 * u;
    };
    const auto growth_tail = [&](double s) {
        const double s2 = s * s;
        const double s4 = s2 * s2;
        const double k1 = h / s4;
        const auto pt = kernel.growth_point(k, k1);
        if (!pt) return 0.0;
        return pt->weight * growth_comb(k1, pt->k2) * 4.0 * h / (s4 * s);
    };

    const QuadratureResult a1 = piece(decay_lo, controls, k, "decay, low");
    const QuadratureResult a2 = piece(decay_hi, controls, k, "decay, high");
    const QuadratureResult b1 = piece(growth_lo, controls, k, "growth, low");
    const QuadratureResult b2 = piece(growth_tail, controls, k, "growth, tail");

    out.decay = a1.value + a2.value;
    out.decay_abserr = a1.abserr + a2.abserr;
    out.growth = b1.value + b2.value;
    out.growth_abserr = b1.abserr + b2.abserr;
    return out;
}

double rel_err(double abserr, double value) {
    if (abserr == 0.0) return 0.0;
    return abserr / std::abs(value);
}

} // namespace

ManifoldIntegrals reduced_manifold_integrals(
    const WaveSystem& system, double k,
    const std::function<double(double, double)>& decay_comb,
    const std::function<double(double, double)>& growth_comb,
    const QuadratureControls& controls) {
    if (!(k > 0.0)) {
        throw std::invalid_argument("reduced_manifold_integrals needs k > 0");
    }
    const ReducedKernel kernel(system);
    const BranchIntegrals r =
        reduced_integrals(kernel, k, decay_comb, growth_comb, controls);
    return ManifoldIntegrals{r.decay, r.growth, r.decay_abserr,
                             r.growth_abserr};
}

RateSample rates_at(const WaveSystem& system, const SpectrumFn& spectrum,
                    double k, const QuadratureControls& controls) {
    if (!(k > 0.0)) {
        throw std::invalid_argument("rates_at needs k > 0");
    }
    const ReducedKernel kernel(system);
    const double eps2 = system.epsilon * system.epsilon;

    const Combination gamma_decay = [&spectrum](double, double k2) {
        return spectrum(k2);
    };
    const Combination gamma_growth = [&spectrum](double k1, double k2) {
        return spectrum(k1) - spectrum(k2);
    };
    const BranchIntegrals g = reduced_integrals(kernel, k, gamma_decay,
                                                gamma_growth, controls);
    const double gamma_val = 8.0 * kPi * eps2 * (g.decay + g.growth);
    const double gamma_abs =
        8.0 * kPi * eps2 * (g.decay_abserr + g.growth_abserr);

    const Combination eta_decay = [&spectrum](double k1, double k2) {
        return spectrum(k1) * spectrum(k2);
    };
    const Combination eta_growth = [&spectrum](double k1, double k2) {
        return 2.0 * spectrum(k1) * spectrum(k2);
    };
    const BranchIntegrals e =
        reduced_integrals(kernel, k, eta_decay, eta_growth, controls);
    const double eta_val = 4.0 * kPi * eps2 * (e.decay + e.growth);
    const double eta_abs =
        4.0 * kPi * eps2 * (e.decay_abserr + e.growth_abserr);

    return RateSample{gamma_val, eta_val, rel_err(gamma_abs, gamma_val),
                      rel_err(eta_abs, eta_val)};
}

RateSample rates_at(const WaveSystem& system,
                    const IsotropicSpectrum& spectrum, double k,
                    const QuadratureControls& controls) {
    const SpectrumFn fn = [&spectrum](double q) { return spectrum(q); };
    return rates_at(system, fn, k, controls);
}

double eta(const WaveSystem& system, const IsotropicSpectrum& spectrum,
           double k, const QuadratureControls& controls) {
    return rates_at(system, spectrum, k, controls).eta;
}

double gamma(const WaveSystem& system, const IsotropicSpectrum& spectrum,
             double k, const QuadratureControls& controls) {
    return rates_at(system, spectrum, k, controls).gamma;
}

RateField rate_field(const WaveSystem& system,
                     const IsotropicSpectrum& spectrum,
                     const std::vector<double>& grid,
                     const QuadratureControls& controls, unsigned threads) {
    const std::size_t n = grid.size();
    RateField out;
    out.grid = grid;
    out.gamma.assign(n, 0.0);
    out.eta.assign(n, 0.0);
    out.gamma_err.assign(n, 0.0);
    out.eta_err.assign(n, 0.0);

    std::vector<std::string> failures(n);
    const auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                const RateSample s = rates_at(system, spectrum, grid[i],
                                              controls);
                out.gamma[i] = s.gamma;
                out.eta[i] = s.eta;
                out.gamma_err[i] = s.gamma_err;
                out.eta_err[i] = s.eta_err;
            } catch (const std::exception& ex) {
                failures[i] = ex.what();
            }
        }
    };

    if (threads <= 1 || n < 2) {
        worker(0, n);
    } else {
        const std::size_t nthreads =
            std::min<std::size_t>(threads, n);
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        const std::size_t block = (n + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            const std::size_t lo = t * block;
            const std::size_t hi = std::min(n, lo + block);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i].empty()) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "rate_field node %zu (k=%.6g): ",
                          i, grid[i]);
            throw NumericalError(buf + failures[i]);
        }
    }
    out.validate();
    return out;
}

RateConstantReport dimensionless_rate_constant(
    const WaveSystem& system, const QuadratureControls& controls) {
    if (!system.power_law) {
        throw std::domain_error(
            "dimensionless rate constant requires a scale-invariant "
            "(power-law) system");
    }
    // The constant is independent of material parameters for the capillary
    // family; evaluate on the unit-material twin so the report is canonical.
    const WaveSystem sys = (system.vertex_kind == VertexKind::capillary)
                               ? capillary_system(1.0, 1.0)
                               : system;
    const double x = sys.vertex_homogeneity + sys.dimension;
    const SpectrumFn n = [x](double q) { return std::pow(q, -x); };
    const RateSample s = rates_at(sys, n, 1.0, controls);
    return RateConstantReport{16.0 * kPi * s.gamma,
                              s.gamma_err};
}

} // namespace wavekin
