#pragma once

#include <array>
#include <functional>
#include <vector>

#include "zoll/exec.hpp"
#include "zoll/profiles.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

// Function on the space of oriented lines, (sigma, mu) with
// mu = -x1 sin(sigma) + x2 cos(sigma) the signed offset.
struct LineFunction {
  std::function<cplx(double, double)> fn;
  bool even_in_mu = false;
  bool sigma_independent = false;

  cplx operator()(double sigma, double mu) const { return fn(sigma, mu); }
  // Throws when the flag is set but spot samples disagree.
  void check_sigma_independence(double tol = 1e-12) const;
  static LineFunction of_mu(std::function<cplx(double)> g, bool even = false);
};

// One-variable function plus the scale past which it is negligible.
struct LineProfile {
  std::function<cplx(double)> fn;
  double extent = 6;
  cplx operator()(double mu) const { return fn(mu); }
};

double radon(const RadialProfile& f, double mu, const QuadratureConfig& cfg);
// Line integral along direction sigma at offset mu, using the full planar
// parametrization (no use of the radial symmetry).
double radon_along(const RadialProfile& f, double sigma, double mu, const QuadratureConfig& cfg);
// One-sided integral from the foot point towards +inf (sign=+1) or -inf
// (sign=-1); the -inf branch carries the orientation sign of the integral.
double half_radon(const RadialProfile& f, double sigma, double mu, int sign,
                  const QuadratureConfig& cfg);

cplx dual_radon(const LineFunction& phi, double x1, double x2, const QuadratureConfig& cfg);

// (i/pi) pv-integral of phi(nu)/(nu-mu).
cplx hilbert(const LineProfile& phi, double mu, const QuadratureConfig& cfg);
std::vector<cplx> hilbert_sweep(const LineProfile& phi, const std::vector<double>& mus,
                                const QuadratureConfig& cfg, Exec ex = Exec::Parallel);

// Cubic-spline copy of phi on [-half_width, half_width]; outside the
// window the original is evaluated directly.
LineProfile tabulate_line(const LineProfile& phi, double half_width, double step, Exec ex = Exec::Parallel);

// Radon transform sampled on [0, M] and returned as an even tabulated
// profile in mu, with M = mult*R + 5 and a fitted tail past M.
RadialProfile radon_table(const RadialProfile& f, const QuadratureConfig& cfg, double step = 1.0 / 64,
                          Exec ex = Exec::Parallel);

struct InversionReport {
  double residual = 0;
  std::vector<double> reconstructed;
  std::vector<double> exact;
  double imaginary_residue = 0;
};

// Reconstructs f from its Radon transform by the Hilbert-derivative-dual
// chain and compares with f on the grid. The sign convention is the
// inversion formula f = (i/2) (d/dmu H fhat)^dual.
InversionReport inversion_report(const RadialProfile& f, const std::vector<std::array<double, 2>>& grid,
                                 const QuadratureConfig& cfg, Exec ex = Exec::Parallel);
double inversion_residual(const RadialProfile& f, const std::vector<std::array<double, 2>>& grid,
                          const QuadratureConfig& cfg, Exec ex = Exec::Parallel);

// 9-point grid used by the acceptance checks: {0,1,2}^2.
std::vector<std::array<double, 2>> unit_grid_3x3();

}  // namespace zoll
