#pragma once

#include <cstddef>
#include <functional>

namespace wavekin {

struct QuadratureResult {
    double value;
    double abserr; // absolute error estimate from the adaptive rule
};

struct QuadratureControls {
    double epsrel = 1e-10;
    double epsabs = 0.0;      // pure relative control by default
    std::size_t limit = 800;  // max subintervals per integral
};

// Adaptive 61-point Gauss-Kronrod integration of f over [a, b]. Throws
// NumericalError when the subdivision budget is exhausted or the integral
// looks divergent. Roundoff-limited termination (the rule cannot reach the
// requested tolerance because of cancellation noise) is treated as success;
// the achieved error is reported in abserr either way.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureControls& controls);

} // namespace wavekin
