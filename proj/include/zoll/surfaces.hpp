#pragma once

#include <string>
#include <utility>

#include "zoll/charts.hpp"
#include "zoll/petean.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

// (sigma, c1, c2) and (sigma + pi, -c1, -c2) describe the same surface.
struct BetaParams {
  double sigma = 0;
  double c1 = 0;
  double c2 = 0;
  // Representative with sigma in [0, pi).
  BetaParams canonical() const;
};

// (1/2) int_0^lambda f along the line of direction sigma through the point,
// where (lambda, mu) is (x1, x2) rotated by -sigma.
double varphi(const RadialProfile& f, double x1, double x2, double sigma, const QuadratureConfig& cfg);

// Chart sign: +1 on D+, -1 on D- (where the metric carries -f).
int chart_sign(Chart c);

// Defining functions of the surface in D+ or D-.
std::pair<double, double> beta_residual_D(const RadialProfile& f, const BetaParams& b, const ChartPoint& p,
                                          const QuadratureConfig& cfg);

// Point of the surface in D+ or D-: lambda runs along the direction sigma in
// the (x1,x2)-plane, tau along the fiber line.
ChartPoint surface_point(const RadialProfile& f, const BetaParams& b, Chart chart, double lambda, double tau,
                         const QuadratureConfig& cfg);

// +-(1/4) radon(f, c1), sign given by the sign of cos(alpha - sigma).
double psi_tilde(const RadialProfile& f, double c1, int branch, const QuadratureConfig& cfg);

// The surface term of the band W for small |tan(beta)|: the half-Radon
// branch table for beta != 0, psi_tilde at beta = 0.
double psi_band(const RadialProfile& f, double alpha, double beta, const BetaParams& b, const QuadratureConfig& cfg);

// Defining functions in W; requires |tan(beta)| < 1/R_f.
std::pair<double, double> beta_residual_W(const RadialProfile& f, const BetaParams& b, const ChartPoint& p,
                                          const QuadratureConfig& cfg);

// Null vector fields tangent to the surfaces of direction sigma.
std::pair<Eigen::Vector4d, Eigen::Vector4d> null_fields(const PeteanMetric& m, double sigma, const Vec4& x);
// The same plane spanned from the orthonormal frame.
std::pair<Eigen::Vector4d, Eigen::Vector4d> frame_fields(const PeteanMetric& m, double sigma, const Vec4& x);
// Largest principal angle between two 2-planes in R^4 (Euclidean).
double span_angle(const std::pair<Eigen::Vector4d, Eigen::Vector4d>& a,
                  const std::pair<Eigen::Vector4d, Eigen::Vector4d>& b);

// Max central-difference derivative of both defining functions along both
// null fields.
double annihilation_residual(const RadialProfile& f, const BetaParams& b, const ChartPoint& p, double step,
                             const QuadratureConfig& cfg);

// The two points at infinity reached along the fiber lines; they are
// antipodal and independent of c2.
std::pair<GrassPoint, GrassPoint> surface_endpoints(const BetaParams& b);

// Sample cloud rows "chart,c1,c2,sigma,x1,x2,x3,x4".
std::string surface_csv_header();
std::string surface_csv_row(const BetaParams& b, const ChartPoint& p);

}  // namespace zoll
