#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zoll/charts.hpp"
#include "zoll/exec.hpp"
#include "zoll/profiles.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

// h = (1/4) H fhat, tabulated on [0, mult*R + 5] with the quadrature step.
OddProfile f_to_h(const RadialProfile& f, const QuadratureConfig& cfg, Exec ex = Exec::Parallel);
// f = 2i (dh/dt)^dual, tabulated on the same kind of grid.
RadialProfile h_to_f(const OddProfile& h, const QuadratureConfig& cfg, Exec ex = Exec::Parallel);

// max |a - b| / max |b| over radii in [0, r_max].
double radial_relative_error(const RadialProfile& a, const RadialProfile& b, double r_max = 4, double dr = 1.0 / 32);
double odd_relative_error(const OddProfile& a, const OddProfile& b, double t_max = 4, double dt = 1.0 / 32);

class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Half-integer Fourier coefficients of theta -> h(a e^{-i theta/2} + conj(a) e^{i theta/2}):
// the sequence is sum_l c[l] e^{i theta (l+1/2)} - conj(c[l]) e^{-i theta (l+1/2)}.
struct FourierCoeffs {
  cplx a{};
  int L = 0;
  std::vector<cplx> c;  // l = 0..L

  cplx reconstruct(double theta) const;
  double tail_ratio() const;  // |c[L]| / max |c[l]|, 0 for the zero sequence
};

// Samples theta on [0, 4 pi) at 8L points and reads the odd FFT bins.
// Throws AliasingError when the last coefficient is not below 1e-10 of the
// largest. L must be a power of two >= 8.
FourierCoeffs fourier_coeffs(const OddProfile& h, cplx a, int L);
// Doubles L from L0 until the tail test passes.
FourierCoeffs fourier_coeffs_auto(const OddProfile& h, cplx a, int L0 = 64, int L_max = 1 << 14);

// Same expansion for the x1 and x2 derivatives of the sampled function,
// with a = (i/2)(x1 + i x2). Doubles L like fourier_coeffs_auto.
std::pair<FourierCoeffs, FourierCoeffs> fourier_coeff_gradient(const OddProfile& h, cplx a, int L0 = 64,
                                                               int L_max = 1 << 14);

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// F(a, omega) = 4i/(1-omega) sum c_l omega^{l+1} for |omega| <= 1.
cplx F_series(const FourierCoeffs& k, cplx omega);
// -conj(F(a, 1/conj(omega))) for |omega| >= 1.
cplx F_exterior(const FourierCoeffs& k, cplx omega);

cplx omega_of_zeta(cplx zeta);
// a = (i/2)(x1 + i x2)
cplx disk_center(double x1, double x2);

// (1/(pi i)) int h(mu)/(mu - xi) dmu for Im xi > 0; h - H h on the real line.
cplx G_cauchy(const OddProfile& h, cplx xi, const QuadratureConfig& cfg);

struct TwistorPoint {
  std::array<cplx, 4> z{};  // largest entry scaled to 1

  static TwistorPoint from(const std::array<cplx, 4>& v);
  // (Gz1, Gz2, Gz3) = ((z2 - i z1), z3, z4) / (z2 + i z1); throws DomainError
  // when z2 + i z1 vanishes.
  std::array<cplx, 3> gz() const;
  // Unit-sphere distance after the best phase alignment.
  double distance(const TwistorPoint& o) const;
  json to_json() const;
};

// Distance to P in the (Gz) chart: |Gz1| = 1, mu = Gz2 e^{-i theta/2} real
// and Im(Gz3 e^{-i theta/2}) = s(mu).
double p_membership_residual(const TwistorPoint& y, const OddProfile& h);

// Phi on the disk bundle. D+: fiber zeta with Im >= 0, D-: Im <= 0, W: xi
// with Im >= 0. W points off the equator are evaluated through the D chart.
TwistorPoint phi_C(const OddProfile& h, const ChartPoint& p, const QuadratureConfig& cfg);

// The correction term H at (x1, x2, zeta): F(a, omega) on Im zeta >= 0 and
// the exterior form on Im zeta < 0.
cplx H_term(const OddProfile& h, double x1, double x2, cplx zeta);
// |(-zeta d1 + d2) H - (sign f / 2)(zeta^2 + 1)| with analytic derivatives.
double holomorphy_residual(const OddProfile& h, const RadialProfile& f, double x1, double x2, cplx zeta);

// -(xi cos(alpha) tan(beta) + sin(alpha)) H(x, zeta(xi)), the W form of the
// correction term off the equator.
cplx B_series(const OddProfile& h, double alpha, double beta, cplx xi);
// The closed integral in mu over [-cot(beta), cot(beta)], through mu = cot(beta) sin(phi).
cplx B_integral(const OddProfile& h, double beta, cplx xi, const QuadratureConfig& cfg);

struct BContinuity {
  std::vector<double> betas;
  std::vector<double> residuals;  // |B(alpha, beta, xi) - G(xi)|
  double alpha_spread = 0;        // spread of B_series over the alphas at the smallest beta
  double integral_gap = 0;        // max |B_series - B_integral| at the smallest beta
};
BContinuity B_continuity(const OddProfile& h, const std::vector<double>& alphas, cplx xi,
                         const std::vector<double>& betas, const QuadratureConfig& cfg);

enum class DiskCase { Interior, Exterior, Case2, Infinity };
std::string disk_case_name(DiskCase c);

struct DiskParams {
  DiskCase kind = DiskCase::Interior;
  cplx a{}, kappa{};       // Interior, Exterior
  double alpha = 0;        // Case2
  double v0 = 0, v1 = 0;   // Case2, v(xi) = v0 + v1 xi
  Vec3 z{};                // Infinity, scaled to z1^2 + z2^2 = 1

  // The hemisphere point this disk comes from (Interior: D+, Exterior: D-,
  // Case2: W on the equator). Throws for the infinity family.
  ChartPoint base_point() const;
  static DiskParams from_point(const ChartPoint& p);
  std::array<double, 4> params() const;
};

// Interior: param zeta, Im >= 0; Exterior: zeta, Im <= 0; Case2: xi,
// Im >= 0; Infinity: u, Im >= 0.
TwistorPoint disk_point(const DiskParams& d, const OddProfile& h, cplx param, const QuadratureConfig& cfg);
// Boundary point of a case-1 disk at omega = e^{i theta}; finite also at
// theta = 0, where zeta is infinite.
TwistorPoint boundary_disk_point(const DiskParams& d, const OddProfile& h, double theta);

class BoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FoliationHit {
  DiskParams disk;
  cplx param{};
};

// The disk through y and its parameter. Throws BoundaryError when y lies on
// P within tol, DomainError on the line z1 = z2 = 0.
FoliationHit foliation_probe(const TwistorPoint& y, const OddProfile& h, const QuadratureConfig& cfg,
                             double tol = 1e-10);

struct JumpSample {
  double s = 0, A = 0;
  double theta = 0;
  double jump = 0;          // closed form from the coefficients h_{A/2,l}
  double jump_numeric = 0;  // from extrapolated one-sided limits of Re H
  double im_gap = 0;        // |lim+ Im H - lim- Im H|
  double im_expected = 0;   // -s(A cos(theta/2)) / sin(theta/2)
  json to_json() const;
};

// Re H along zeta = s + i t at x = (0, -A) jumps across t = 0 by
// (4/|sin(theta/2)|) |Re sum_l h_{A/2,l} e^{i theta (l+1/2)}|.
JumpSample varpi_jump(const OddProfile& h, double s, double A);
std::vector<JumpSample> jump_scan(const OddProfile& h, const std::vector<double>& ss, const std::vector<double>& As,
                                  Exec ex = Exec::Parallel);

std::string disk_csv_header();
std::string disk_csv_row(const DiskParams& d, cplx param, const TwistorPoint& y);

}  // namespace zoll
