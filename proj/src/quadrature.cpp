#include "predictive/quadrature.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "predictive/errors.hpp"

namespace predictive {

namespace {

struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
};

void ensure_quiet() {
  static GslQuiet quiet;  // disable GSL's abort-on-error once
  (void)quiet;
}

double trampoline(double x, void* p) {
  auto* f = static_cast<const std::function<double(double)>*>(p);
  return (*f)(x);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo,
                     double hi, double abs_tol) {
  ensure_quiet();
  constexpr size_t kLimit = 512;
  std::unique_ptr<gsl_integration_workspace,
                  decltype(&gsl_integration_workspace_free)>
      ws(gsl_integration_workspace_alloc(kLimit),
         &gsl_integration_workspace_free);

  gsl_function gf;
  gf.function = &trampoline;
  gf.params = const_cast<std::function<double(double)>*>(&f);

  double value = 0.0, err = 0.0;
  int status;
  const double rel_tol = 1e-10;
  const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
  if (lo_inf && hi_inf) {
    status = gsl_integration_qagi(&gf, abs_tol, rel_tol, kLimit, ws.get(),
                                  &value, &err);
  } else if (hi_inf) {
    status = gsl_integration_qagiu(&gf, lo, abs_tol, rel_tol, kLimit, ws.get(),
                                   &value, &err);
  } else if (lo_inf) {
    status = gsl_integration_qagil(&gf, hi, abs_tol, rel_tol, kLimit, ws.get(),
                                   &value, &err);
  } else {
    status = gsl_integration_qags(&gf, lo, hi, abs_tol, rel_tol, kLimit,
                                  ws.get(), &value, &err);
  }

  if (status != 0 && err > abs_tol) {
    std::ostringstream os;
    os << "quadrature did not converge (gsl status " << status
       << ", residual estimate " << err << ", tolerance " << abs_tol << ")";
    throw IntegrationError(os.str(), err);
  }
  return {value, err};
}

double norm_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * M_PI * var);
}

double norm_cdf(double x, double mean, double var) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

double norm_cdf_inv(double p) { return gsl_cdf_ugaussian_Pinv(p); }

}  // namespace predictive
