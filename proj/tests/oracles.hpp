#pragma once

// Independent reference computations for the tests. These go through GSL's
// QUADPACK ports and special functions, not through the library's own
// Gauss-Kronrod code.

#include <cmath>
#include <functional>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_dawson.h>

namespace oracle {

using Fn = std::function<double(double)>;

namespace detail {
inline double trampoline(double x, void* p) { return (*static_cast<Fn*>(p))(x); }
struct Workspace {
  gsl_integration_workspace* w;
  Workspace() : w(gsl_integration_workspace_alloc(20000)) { gsl_set_error_handler_off(); }
  ~Workspace() { gsl_integration_workspace_free(w); }
};
}  // namespace detail

inline double integrate(Fn f, double a, double b, double tol = 1e-12) {
  detail::Workspace ws;
  gsl_function g{&detail::trampoline, &f};
  double r = 0, e = 0;
  gsl_integration_qags(&g, a, b, 0, tol, 20000, ws.w, &r, &e);
  return r;
}

inline double integrate_upper(Fn f, double a, double tol = 1e-12) {
  detail::Workspace ws;
  gsl_function g{&detail::trampoline, &f};
  double r = 0, e = 0;
  gsl_integration_qagiu(&g, a, 0, tol, 20000, ws.w, &r, &e);
  return r;
}

inline double integrate_line(Fn f, double tol = 1e-12) {
  detail::Workspace ws;
  gsl_function g{&detail::trampoline, &f};
  double r = 0, e = 0;
  gsl_integration_qagi(&g, 0, tol, 20000, ws.w, &r, &e);
  return r;
}

// pv-integral of phi(nu)/(nu-mu) over [mu-L, mu+L] by QAWC, plus the far
// part by plain quadrature.
inline double cauchy_pv(Fn phi, double mu, double window = 40.0) {
  detail::Workspace ws;
  gsl_function g{&detail::trampoline, &phi};
  double r = 0, e = 0;
  gsl_integration_qawc(&g, mu - window, mu + window, mu, 0, 1e-12, 20000, ws.w, &r, &e);
  Fn right = [&](double nu) { return phi(nu) / (nu - mu); };
  r += integrate_upper(right, mu + window);
  Fn left = [&](double u) { return phi(-u) / (-u - mu); };
  r += integrate_upper(left, -(mu - window));
  return r;
}

inline double dawson(double x) { return gsl_sf_dawson(x); }
inline double bessel_i0(double x) { return gsl_sf_bessel_I0(x); }

}  // namespace oracle
