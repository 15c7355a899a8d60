#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wavekin/numeric.hpp"

namespace wavekin {

struct OdeControls {
    double rtol = 1e-10;
    double atol = 0.0; // absolute floor added to the per-component scale
    // Optional per-component absolute floors (empty selects the scalar
    // atol). Components spanning wildly different magnitudes (e.g. a moment
    // hierarchy where order p lives at p! * n^p) need individual floors: a
    // component rising from exactly zero has |y_new| proportional to a
    // power of h, so a purely relative scale shrinks together with the
    // step and the error ratio becomes h-independent — no refinement can
    // ever pass. A floor at (tolerance * natural scale) restores absolute
    // control through the turn-on and hands over to relative control once
    // the component reaches its natural size.
    std::vector<double> component_atol;
    double initial_step = 0.0; // 0 selects automatically
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2000000;
};

using OdeRhs = std::function<void(double, const std::vector<double>&,
                                  std::vector<double>&)>;
using OdePredicate = std::function<bool(const std::vector<double>&)>;
using OdeCallback = std::function<void(double, const std::vector<double>&)>;

// Adaptive explicit Dormand-Prince 5(4) with FSAL. Integrates y' = f(t, y)
// from t0 through every checkpoint (strictly increasing, all > t0); the step
// is clamped so each checkpoint time is hit exactly and on_checkpoint fires
// there. A trial step is accepted only when the embedded error estimate
// passes AND admissible(y_trial) holds; inadmissible states halve the step.
// Throws NumericalError when the step size underflows (stiffness or a state
// constraint that cannot be satisfied) or the step budget is exhausted.
inline void integrate_ode(const OdeRhs& f, std::vector<double>& y, double t0,
                          const std::vector<double>& checkpoints,
                          const OdePredicate& admissible,
                          const OdeCallback& on_step_start,
                          const OdeCallback& on_checkpoint,
                          const OdeControls& controls) {
    if (checkpoints.empty()) return;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const double prev = (i == 0) ? t0 : checkpoints[i - 1];
        if (!(checkpoints[i] > prev)) {
            throw std::invalid_argument(
                "ode checkpoints must be strictly increasing and after t0");
        }
    }
    const double t_end = checkpoints.back();
    const std::size_t n = y.size();
    if (!controls.component_atol.empty() &&
        controls.component_atol.size() != n) {
        throw std::invalid_argument(
            "ode per-component atol must match the state dimension");
    }
    const double* atol_vec =
        controls.component_atol.empty() ? nullptr
                                        : controls.component_atol.data();

    // Dormand-Prince coefficients; row 7 doubles as the 5th-order weights
    // (first-same-as-last).
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> work(n), y_new(n);

    double t = t0;
    double h = controls.initial_step;
    if (!(h > 0.0)) {
        h = std::min(controls.max_step, (t_end - t0) * 1e-4);
    }
    h = std::min(h, controls.max_step);

    std::size_t checkpoint_index = 0;
    bool fresh_k1 = false;

    for (std::size_t step = 0; step < controls.max_steps; ++step) {
        if (checkpoint_index >= checkpoints.size()) return;
        const double target = checkpoints[checkpoint_index];
        bool clamped = false;
        const double h_unclamped = h;
        if (t + h >= target) {
            h = target - t;
            clamped = true;
        }
        const double h_min =
            16.0 * std::numeric_limits<double>::epsilon() *
            std::max(std::abs(t), 1.0);
        if (!(h > h_min) && !clamped) {
            throw NumericalError(
                "ode step size underflow (stiff system or unsatisfiable "
                "state constraint)");
        }

        if (on_step_start) {
            // The hook may retune the RHS (e.g. refresh rates frozen within
            // the step), which invalidates the first-same-as-last stage.
            on_step_start(t, y);
            fresh_k1 = false;
        }
        if (!fresh_k1) f(t, y, k1);

        for (std::size_t i = 0; i < n; ++i)
            work[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, work, k2);
        for (std::size_t i = 0; i < n; ++i)
            work[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, work, k3);
        for (std::size_t i = 0; i < n; ++i)
            work[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, work, k4);
        for (std::size_t i = 0; i < n; ++i)
            work[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        f(t + c5 * h, work, k5);
        for (std::size_t i = 0; i < n; ++i)
            work[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        f(t + h, work, k6);
        for (std::size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                   b5 * k5[i] + b6 * k6[i]);
        f(t + h, y_new, k7);

        // Error norm: RMS of the embedded difference against the
        // per-component scale atol + rtol * |y|. A component whose value is
        // exactly zero at both endpoints (possible under atol = 0) is
        // excluded: in lower-triangular cascades a state turns on through
        // the stage chain one order per step, and such a component joins
        // the error norm on the step after it first becomes nonzero.
        double err_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err_i =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
            const double scale =
                (atol_vec ? atol_vec[i] : controls.atol) +
                controls.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            if (scale == 0.0) continue;
            const double q = err_i / scale;
            err_sq += q * q;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        const bool accept = std::isfinite(err) && err <= 1.0;
        if (accept && admissible && !admissible(y_new)) {
            // The error controller is happy but the state violates a hard
            // constraint (e.g. positivity); treat like a rejection.
            h *= 0.5;
            fresh_k1 = true; // k1 is still valid at (t, y)
            if (h <= h_min) {
                throw NumericalError(
                    "ode state constraint rejected every step size");
            }
            continue;
        }

        double factor;
        if (!std::isfinite(err)) {
            factor = 0.2;
        } else if (err == 0.0) {
            factor = 5.0;
        } else {
            factor = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        }

        if (accept) {
            t = t + h;
            y.swap(y_new);
            k1.swap(k7);
            fresh_k1 = true;
            if (clamped) {
                t = target; // land on the checkpoint exactly
                on_checkpoint(t, y);
                ++checkpoint_index;
                fresh_k1 = false; // t changed by assignment; recompute
            }
            // Grow from the pre-clamp step so a short hop onto a checkpoint
            // does not collapse the step size for the next segment.
            h = std::min(std::max(h, h_unclamped) * factor,
                         controls.max_step);
        } else {
            h *= std::min(factor, 0.5);
            fresh_k1 = true; // k1 unchanged at (t, y)
            if (h <= h_min) {
                throw NumericalError(
                    "ode step size underflow while controlling local error");
            }
        }
    }
    throw NumericalError("ode step budget exhausted before reaching t_end");
}

} // namespace wavekin
