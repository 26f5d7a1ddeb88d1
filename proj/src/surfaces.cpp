#include "zoll/surfaces.hpp"

#include <cmath>
#include <cstdio>

#include "zoll/transforms.hpp"

namespace zoll {

BetaParams BetaParams::canonical() const {
  double s = std::fmod(sigma, 2 * M_PI);
  if (s < 0) s += 2 * M_PI;
  BetaParams b{s, c1, c2};
  if (s >= M_PI) b = {s - M_PI, -c1, -c2};
  if (b.sigma >= M_PI) b.sigma = 0;  // rounding at the top of the range
  return b;
}

double varphi(const RadialProfile& f, double x1, double x2, double sigma, const QuadratureConfig& cfg) {
  cfg.validate();
  if (f.is_zero()) return 0.0;
  const double c = std::cos(sigma), s = std::sin(sigma);
  const double lam = c * x1 + s * x2, mu = -s * x1 + c * x2;
  if (lam == 0) return 0.0;
  const double dir = lam > 0 ? 1 : -1;
  auto g = [&](double t) {
    const double tt = dir * t;
    return f(c * tt - s * mu, s * tt + c * mu);
  };
  // Finite differences of varphi need it far below the usual tolerance, so
  // panels are kept narrow relative to the profile scale.
  QuadratureConfig q = cfg;
  q.tolerance = std::min(cfg.tolerance, 1e-13);
  const double reach = std::min(std::abs(lam), cfg.truncation_multiplier * f.cutoff() + 5);
  q.panels = std::max(cfg.panels, 2 * static_cast<int>(std::ceil(4 * reach)));
  double v = integrate(g, 0.0, reach, q);
  if (std::abs(lam) > reach) v += integrate(g, reach, std::abs(lam), cfg);
  return 0.5 * dir * v;
}

int chart_sign(Chart c) {
  if (c == Chart::W) throw DomainError("the band W has no single metric sign");
  return c == Chart::DPlus ? 1 : -1;
}

std::pair<double, double> beta_residual_D(const RadialProfile& f, const BetaParams& b, const ChartPoint& p,
                                          const QuadratureConfig& cfg) {
  const int sg = chart_sign(p.chart);
  const auto& x = p.coords;
  const double c = std::cos(b.sigma), s = std::sin(b.sigma);
  const double r1 = -s * x[0] + c * x[1] - b.c1;
  const double r2 = c * x[2] + s * x[3] + sg * varphi(f, x[0], x[1], b.sigma, cfg) - b.c2;
  return {r1, r2};
}

ChartPoint surface_point(const RadialProfile& f, const BetaParams& b, Chart chart, double lambda, double tau,
                         const QuadratureConfig& cfg) {
  const int sg = chart_sign(chart);
  const double c = std::cos(b.sigma), s = std::sin(b.sigma);
  ChartPoint p;
  p.chart = chart;
  p.coords[0] = lambda * c - b.c1 * s;
  p.coords[1] = lambda * s + b.c1 * c;
  const double level = b.c2 - sg * varphi(f, p.coords[0], p.coords[1], b.sigma, cfg);
  p.coords[2] = level * c - tau * s;
  p.coords[3] = level * s + tau * c;
  return p;
}

double psi_tilde(const RadialProfile& f, double c1, int branch, const QuadratureConfig& cfg) {
  if (branch != 1 && branch != -1) throw std::invalid_argument("branch must be +1 or -1");
  return branch * 0.25 * radon(f, c1, cfg);
}

double psi_band(const RadialProfile& f, double alpha, double beta, const BetaParams& b, const QuadratureConfig& cfg) {
  const double ca = std::cos(alpha - b.sigma);
  if (ca == 0) throw DomainError("cos(alpha - sigma) = 0 is off the surfaces near the equator");
  const int branch = ca > 0 ? 1 : -1;
  if (beta == 0) return psi_tilde(f, b.c1, branch, cfg);
  const double mu = std::sin(alpha - b.sigma) / std::tan(beta);
  // On D+ (beta > 0) the integral runs towards the sign of cos(alpha-sigma);
  // on D- the metric carries -f and the direction is reversed.
  if (beta > 0) return 0.5 * half_radon(f, b.sigma, mu, branch, cfg);
  return -0.5 * half_radon(f, b.sigma, mu, -branch, cfg);
}

std::pair<double, double> beta_residual_W(const RadialProfile& f, const BetaParams& b, const ChartPoint& p,
                                          const QuadratureConfig& cfg) {
  if (p.chart != Chart::W) throw DomainError("beta_residual_W needs a point of the band W");
  const double alpha = p.coords[0], beta = p.coords[1], e1 = p.coords[2], e2 = p.coords[3];
  if (!(std::abs(beta) < M_PI / 2)) throw DomainError("beta must lie inside (-pi/2, pi/2)");
  const double rf = f.is_zero() ? 0.0 : f.effective_radius();
  if (!(std::abs(std::tan(beta)) * rf < 1))
    throw DomainError("|tan(beta)| must be below 1/R_f = " + std::to_string(rf > 0 ? 1 / rf : INFINITY));
  const double r1 = std::sin(alpha - b.sigma) - b.c1 * std::tan(beta);
  const double r2 = -b.c1 * e1 - std::cos(alpha - b.sigma) * e2 + psi_band(f, alpha, beta, b, cfg) - b.c2;
  return {r1, r2};
}

std::pair<Eigen::Vector4d, Eigen::Vector4d> null_fields(const PeteanMetric& m, double sigma, const Vec4& x) {
  const double c = std::cos(sigma), s = std::sin(sigma), f = m.value(x[0], x[1]);
  return {Eigen::Vector4d(c, s, -0.5 * f * c, -0.5 * f * s), Eigen::Vector4d(0, 0, s, -c)};
}

std::pair<Eigen::Vector4d, Eigen::Vector4d> frame_fields(const PeteanMetric& m, double sigma, const Vec4& x) {
  const Mat4 e = orthonormal_frame(m, x).e;
  const double c2 = std::cos(2 * sigma), s2 = std::sin(2 * sigma);
  return {e.col(0) - s2 * e.col(2) + c2 * e.col(3), e.col(1) + c2 * e.col(2) + s2 * e.col(3)};
}

double span_angle(const std::pair<Eigen::Vector4d, Eigen::Vector4d>& a,
                  const std::pair<Eigen::Vector4d, Eigen::Vector4d>& b) {
  Eigen::Matrix<double, 4, 2> ma, mb;
  ma << a.first, a.second;
  mb << b.first, b.second;
  const Eigen::Matrix<double, 4, 2> qa = ma.householderQr().householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  const Eigen::Matrix<double, 4, 2> qb = mb.householderQr().householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  const Eigen::Matrix<double, 4, 2> off = qb - qa * (qa.transpose() * qb);
  const double s = Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>>(off).singularValues()[0];
  return std::asin(std::min(1.0, s));
}

double annihilation_residual(const RadialProfile& f, const BetaParams& b, const ChartPoint& p, double step,
                             const QuadratureConfig& cfg) {
  const int sg = chart_sign(p.chart);
  const PeteanMetric m = PeteanMetric::radial(f, sg, p.chart);
  const auto fields = null_fields(m, b.sigma, p.coords);
  double worst = 0;
  for (const Eigen::Vector4d& n : {fields.first, fields.second}) {
    ChartPoint a = p, z = p;
    for (int i = 0; i < 4; ++i) {
      a.coords[i] += step * n[i];
      z.coords[i] -= step * n[i];
    }
    const auto ra = beta_residual_D(f, b, a, cfg), rz = beta_residual_D(f, b, z, cfg);
    worst = std::max(worst, std::abs(ra.first - rz.first) / (2 * step));
    worst = std::max(worst, std::abs(ra.second - rz.second) / (2 * step));
  }
  return worst;
}

std::pair<GrassPoint, GrassPoint> surface_endpoints(const BetaParams& b) {
  const double c = std::cos(b.sigma), s = std::sin(b.sigma);
  Mat42 up, down;
  up << -b.c1 * s, c, b.c1 * c, s, 1, 0, 0, 0;
  down << b.c1 * s, c, -b.c1 * c, s, -1, 0, 0, 0;
  return {GrassPoint(up), GrassPoint(down)};
}

std::string surface_csv_header() { return "chart,c1,c2,sigma,x1,x2,x3,x4"; }

std::string surface_csv_row(const BetaParams& b, const ChartPoint& p) {
  std::string row = chart_name(p.chart);
  char buf[32];
  for (double v : {b.c1, b.c2, b.sigma, p.coords[0], p.coords[1], p.coords[2], p.coords[3]}) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    row += buf;
  }
  return row;
}

}  // namespace zoll
