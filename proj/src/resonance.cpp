#include "wavekin/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <stdexcept>
#include <utility>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_roots.h>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

struct SortedSides {
    double x, y, z; // x >= y >= z
};

SortedSides sort_sides(double a, double b, double c) {
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);
    return {a, b, c};
}

double omega_gap(double k2, void* params) {
    const auto* ctx =
        static_cast<std::pair<const WaveSystem*, double>*>(params);
    return ctx->first->dispersion(k2) - ctx->second;
}

} // namespace

std::optional<double> triangle_factor(double k, double k1, double k2) {
    if (!(k > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) {
        throw std::domain_error("triangle_factor needs positive side lengths");
    }
    const SortedSides s = sort_sides(k, k1, k2);
    // Grouped differences keep every factor exact to a few ulp even for
    // needle triangles (Kahan's ordering of Heron's formula).
    const double f_small = s.z - (s.x - s.y); // <= 0 iff no triangle
    if (f_small < 0.0) return std::nullopt;
    const double f_mid = s.z + (s.x - s.y);
    const double f_large = s.x + (s.y - s.z);
    const double perimeter = s.x + (s.y + s.z);
    return 0.5 * std::sqrt(perimeter * f_small * f_mid * f_large);
}

std::optional<double> angular_weight(double k, double k1, double k2) {
    const auto s = triangle_factor(k, k1, k2);
    if (!s || *s == 0.0) return std::nullopt;
    return 2.0 / *s;
}

std::optional<TriadGeometry> triad_geometry(double k, double k1, double k2) {
    const auto s = triangle_factor(k, k1, k2);
    if (!s) return std::nullopt;
    const double w = (*s > 0.0)
                         ? 2.0 / *s
                         : std::numeric_limits<double>::infinity();
    return TriadGeometry{k, k1, k2, *s, w};
}

std::optional<ResonantPartner> resonant_partner(const WaveSystem& system,
                                                double k, double k1) {
    if (!(k > 0.0) || !(k1 > 0.0)) {
        throw std::domain_error("resonant_partner needs positive wavenumbers");
    }
    if (system.power_law) {
        const double a = system.power_law->exponent;
        if (k1 >= k) return std::nullopt;
        // k2 = (k^a - k1^a)^{1/a}, written via log1p/expm1 so the root stays
        // accurate when k1 -> 0 (k2 grazing k) or k1 -> k (k2 -> 0).
        const double la = a * std::log(k1 / k);
        const double log_ratio = std::log1p(-std::exp(la)) / a;
        const double k2 = k * std::exp(log_ratio);
        if (!(k2 > 0.0)) return std::nullopt;
        return ResonantPartner{k2, 1.0 / system.dispersion_derivative(k2)};
    }

    const double target = system.dispersion(k) - system.dispersion(k1);
    if (!(target > 0.0)) return std::nullopt;

    // Bracket the root: dispersion is strictly increasing, so expand the
    // lower edge down until it undershoots the target.
    double hi = k;
    double lo = std::min(k, k1);
    for (int i = 0; i < 600 && system.dispersion(lo) >= target; ++i) {
        lo *= 0.1;
    }
    if (system.dispersion(lo) >= target) {
        throw NumericalError("resonant_partner: failed to bracket the root");
    }

    std::pair<const WaveSystem*, double> ctx{&system, target};
    gsl_function f;
    f.function = &omega_gap;
    f.params = &ctx;

    gsl_root_fsolver* solver = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
    if (solver == nullptr) throw std::bad_alloc();
    double root = 0.0;
    int status = gsl_root_fsolver_set(solver, &f, lo, hi);
    for (int iter = 0; status == GSL_SUCCESS && iter < 200; ++iter) {
        status = gsl_root_fsolver_iterate(solver);
        if (status != GSL_SUCCESS) break;
        root = gsl_root_fsolver_root(solver);
        const double a = gsl_root_fsolver_x_lower(solver);
        const double b = gsl_root_fsolver_x_upper(solver);
        if (gsl_root_test_interval(a, b, 0.0, 1e-12) == GSL_SUCCESS) {
            gsl_root_fsolver_free(solver);
            return ResonantPartner{root,
                                   1.0 / system.dispersion_derivative(root)};
        }
    }
    gsl_root_fsolver_free(solver);
    throw NumericalError("resonant_partner: root refinement did not converge");
}

} // namespace wavekin
