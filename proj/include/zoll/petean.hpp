#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "zoll/charts.hpp"
#include "zoll/profiles.hpp"

namespace zoll {

using Mat4 = Eigen::Matrix4d;

// g = 2(dx1 dx3 + dx2 dx4) + sign*f(x1,x2)(dx1^2 + dx2^2). The D- chart
// carries the dual metric, i.e. sign = -1.
struct PeteanMetric {
  PlaneFunction f = PlaneFunction::zero();
  int sign = 1;
  Chart chart = Chart::DPlus;

  static PeteanMetric radial(const RadialProfile& f, int sign = 1, Chart chart = Chart::DPlus);
  Jet2 jet(double x1, double x2) const { return f.jet(x1, x2).scaled(sign); }
  double value(double x1, double x2) const { return sign * f(x1, x2); }
};

Mat4 metric_tensor(const PeteanMetric& m, const Vec4& x);

enum class FrameScale {
  Orthonormal,  // columns scaled by 1/sqrt(2 sqrt(D))
  Unnormalized  // columns scaled by 1/(2 sqrt(D))
};

struct FrameData {
  double D = 4, a = 1, b = -1;
  Mat4 e;                     // column i holds e_{i+1} in the coordinate basis
  Eigen::Vector4d eta;        // diagonal of g(e_i, e_j)
  double orthonormality = 0;  // max |g(e_i,e_j) - diag(eta)|
};

FrameData orthonormal_frame(const PeteanMetric& m, const Vec4& x, FrameScale scale = FrameScale::Orthonormal);

// gamma[k](i, j) = Gamma^k_{ij}, zero-based indices.
using Christoffel = std::array<Mat4, 4>;

// Levi-Civita symbols from the analytic first derivatives of f.
Christoffel christoffel_exact(const PeteanMetric& m, const Vec4& x);
// Central differences of metric_tensor; step in [1e-6, 1e-2].
Christoffel christoffel_fd(const PeteanMetric& m, const Vec4& x, double step);

struct CovariantDerivative {
  Eigen::Vector4d value = Eigen::Vector4d::Zero();
  bool oracle_sourced = false;
};

// nabla_{d_direction} d_field with 1-based indices. Entries covered by the
// closed form (direction 3 or 4, and direction 1 with field 1, 3 or 4) use
// the exact symbols; the rest come from the finite-difference oracle.
CovariantDerivative nabla_closed_form(const PeteanMetric& m, int direction, int field, const Vec4& x);
// The closed-form entries with an extra f f_1/(2D) multiple of the field
// added. Only defined for direction 1 with field 1, 3 or 4; throws otherwise.
Eigen::Vector4d nabla_with_extra_term(const PeteanMetric& m, int direction, int field, const Vec4& x);

// Riemann tensor R^a_{bcd}, stored as riemann[a][b](c, d).
using Riemann = std::array<std::array<Mat4, 4>, 4>;
Riemann riemann_fd(const PeteanMetric& m, const Vec4& x, double step);

struct AsdConnection {
  Eigen::Matrix3d omega[4];  // omega[k](a, b): component of nabla_k Phi_a along Phi_b
  double norm = 0;           // max |omega|
  double leak = 0;           // max component of nabla Phi_a along the self-dual part
};
// Connection on the anti-self-dual bivectors in the frame
// {e1^e2 - e3^e4, e1^e3 - e2^e4, e1^e4 + e2^e3}.
AsdConnection asd_connection(const PeteanMetric& m, const Vec4& x, double step,
                             FrameScale scale = FrameScale::Orthonormal);

struct CurvatureReport {
  Vec4 x{};
  double riemann_max = 0;
  double gamma_dev = 0;
  double asd_norm = 0;
  double harmonic_residual = 0;

  static std::string csv_header() { return "x1,x2,x3,x4,riem_max,gamma_dev,asd_norm,harm_res"; }
  std::string csv_row() const;
};

CurvatureReport curvature_report(const PeteanMetric& m, const Vec4& x, double step = 1e-4);

// Metric near the sphere at infinity in the U-chart, written in the basis
// (du1, dr, dphi, du4) with (u2, u3) = r(cos phi, sin phi).
struct SingularExpansion {
  double r = 0, phi = 0;
  Mat4 scaled;    // u2^2 times the pulled-back metric
  Mat4 standard;  // 2(du1 du3 + du2 du4)
  Mat4 leading;   // r^2 f(u1 tan(phi) - u4, -tan(phi)) {(1+u1^2) dphi^2 + (sin(phi) du1 + cos(phi) du4)^2}
  Mat4 exact;     // the same r^2 block with the exact coefficients
  double residual = 0;        // max |scaled - standard - leading|
  double exact_residual = 0;  // max |scaled - standard - exact|
};

SingularExpansion singular_expansion(const RadialProfile& f, const Vec4& u);
double singular_expansion_residual(const RadialProfile& f, const Vec4& u);

}  // namespace zoll
