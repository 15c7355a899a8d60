#include "wavekin/quadrature.hpp"

#include <new>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "wavekin/numeric.hpp"

namespace wavekin {

namespace {

// GSL's default error handler aborts the process; disable it once and handle
// status codes at the call sites instead.
const int kHandlerDisabled = [] {
    gsl_set_error_handler_off();
    return 0;
}();

struct WorkspaceGuard {
    gsl_integration_workspace* w;
    explicit WorkspaceGuard(std::size_t limit)
        : w(gsl_integration_workspace_alloc(limit)) {
        if (w == nullptr) throw std::bad_alloc();
    }
    ~WorkspaceGuard() { gsl_integration_workspace_free(w); }
    WorkspaceGuard(const WorkspaceGuard&) = delete;
    WorkspaceGuard& operator=(const WorkspaceGuard&) = delete;
};

double call_std_function(double x, void* params) {
    const auto* f = static_cast<const std::function<double(double)>*>(params);
    return (*f)(x);
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureControls& controls) {
    (void)kHandlerDisabled;
    WorkspaceGuard workspace(controls.limit);

    gsl_function gf;
    gf.function = &call_std_function;
    gf.params = const_cast<std::function<double(double)>*>(&f);

    double value = 0.0;
    double abserr = 0.0;
    const int status = gsl_integration_qag(
        &gf, a, b, controls.epsabs, controls.epsrel,
        controls.limit, GSL_INTEG_GAUSS61, workspace.w, &value, &abserr);

    // EROUND means the requested tolerance is below the roundoff floor of
    // the integrand; the estimate is still the best available and abserr is
    // honest, so pass it through rather than failing the whole computation.
    if (status != GSL_SUCCESS && status != GSL_EROUND) {
        throw NumericalError(std::string("adaptive quadrature failed: ") +
                             gsl_strerror(status));
    }
    return QuadratureResult{value, abserr};
}

} // namespace wavekin
