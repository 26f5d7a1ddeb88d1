#include "zoll/petean.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace zoll {

namespace {

void check_index(int i, const char* what) {
  if (i < 1 || i > 4) throw std::invalid_argument(std::string(what) + " index must be 1..4");
}

Vec4 shifted(const Vec4& x, int k, double h) {
  Vec4 y = x;
  y[k] += h;
  return y;
}

Christoffel from_metric_derivatives(const Mat4& ginv, const std::array<Mat4, 4>& dg) {
  // dg[l](i, j) = d_l g_ij
  Christoffel gam;
  for (int k = 0; k < 4; ++k) gam[k].setZero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) {
        const double lower = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        if (lower == 0) continue;
        for (int k = 0; k < 4; ++k) gam[k](i, j) += ginv(k, l) * lower;
      }
  return gam;
}

Mat4 wedge(const Eigen::Vector4d& a, const Eigen::Vector4d& b) { return a * b.transpose() - b * a.transpose(); }

// Anti-self-dual then self-dual bivectors of the frame.
std::array<Mat4, 6> bivector_frame(const Mat4& e) {
  const auto w = [&](int i, int j) { return wedge(e.col(i), e.col(j)); };
  return {w(0, 1) - w(2, 3), w(0, 2) - w(1, 3), w(0, 3) + w(1, 2),
          w(0, 1) + w(2, 3), w(0, 2) + w(1, 3), w(0, 3) - w(1, 2)};
}

// Sign pattern of g(e_i, e_i) for f = 0, kept for every f by continuity.
const Eigen::Vector4d& reference_signature() {
  static const Eigen::Vector4d eta = [] {
    Mat4 c;
    c << 1, -1, -1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1;
    Mat4 g = Mat4::Zero();
    g(0, 2) = g(2, 0) = g(1, 3) = g(3, 1) = 1;
    const Mat4 gram = c.transpose() * g * c;
    Eigen::Vector4d s;
    for (int i = 0; i < 4; ++i) s[i] = gram(i, i) > 0 ? 1 : -1;
    return s;
  }();
  return eta;
}

}  // namespace

PeteanMetric PeteanMetric::radial(const RadialProfile& f, int sign, Chart chart) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("metric sign must be +1 or -1");
  return {PlaneFunction::radial(f), sign, chart};
}

Mat4 metric_tensor(const PeteanMetric& m, const Vec4& x) {
  const double f = m.value(x[0], x[1]);
  Mat4 g = Mat4::Zero();
  g(0, 0) = g(1, 1) = f;
  g(0, 2) = g(2, 0) = g(1, 3) = g(3, 1) = 1;
  return g;
}

FrameData orthonormal_frame(const PeteanMetric& m, const Vec4& x, FrameScale scale) {
  FrameData fr;
  const double f = m.value(x[0], x[1]);
  fr.D = f * f + 4;
  const double sd = std::sqrt(fr.D);
  fr.a = (f + sd) / 2;
  fr.b = (f - sd) / 2;
  const double a = fr.a, b = fr.b;
  Mat4 c;
  c << 1, -1, -1, 1,
      1, 1, -1, -1,
      -b, b, a, -a,
      -b, -b, a, a;
  const double k = scale == FrameScale::Orthonormal ? 1 / std::sqrt(2 * sd) : 1 / (2 * sd);
  fr.e = k * c;
  const Mat4 gram = fr.e.transpose() * metric_tensor(m, x) * fr.e;
  fr.eta = reference_signature();
  fr.orthonormality = (gram - Mat4(fr.eta.asDiagonal())).cwiseAbs().maxCoeff();
  return fr;
}

Christoffel christoffel_exact(const PeteanMetric& m, const Vec4& x) {
  const Jet2 j = m.jet(x[0], x[1]);
  std::array<Mat4, 4> dg;
  for (auto& d : dg) d.setZero();
  dg[0](0, 0) = dg[0](1, 1) = j.d1;
  dg[1](0, 0) = dg[1](1, 1) = j.d2;
  return from_metric_derivatives(metric_tensor(m, x).inverse(), dg);
}

Christoffel christoffel_fd(const PeteanMetric& m, const Vec4& x, double step) {
  if (!(step >= 1e-6 && step <= 1e-2)) throw std::invalid_argument("finite-difference step must lie in [1e-6, 1e-2]");
  std::array<Mat4, 4> dg;
  for (int l = 0; l < 4; ++l)
    dg[l] = (metric_tensor(m, shifted(x, l, step)) - metric_tensor(m, shifted(x, l, -step))) / (2 * step);
  const Mat4 g = metric_tensor(m, x);
  const double det = g.determinant();
  if (!(std::abs(det) > 1e-12)) throw std::logic_error("metric matrix is singular");
  return from_metric_derivatives(g.inverse(), dg);
}

CovariantDerivative nabla_closed_form(const PeteanMetric& m, int direction, int field, const Vec4& x) {
  check_index(direction, "direction");
  check_index(field, "field");
  CovariantDerivative out;
  const bool listed = direction >= 3 || (direction == 1 && field != 2);
  const Christoffel gam = listed ? christoffel_exact(m, x) : christoffel_fd(m, x, 1e-4);
  for (int k = 0; k < 4; ++k) out.value[k] = gam[k](direction - 1, field - 1);
  out.oracle_sourced = !listed;
  return out;
}

Eigen::Vector4d nabla_with_extra_term(const PeteanMetric& m, int direction, int field, const Vec4& x) {
  check_index(direction, "direction");
  check_index(field, "field");
  if (direction >= 3) return Eigen::Vector4d::Zero();
  if (direction != 1 || field == 2) throw std::invalid_argument("entry not listed in the closed form");
  const Jet2 j = m.jet(x[0], x[1]);
  const double extra = j.v * j.d1 / (2 * (j.v * j.v + 4));
  Eigen::Vector4d v = Eigen::Vector4d::Zero();
  v[field - 1] = extra;
  if (field == 1) {
    v[2] += j.d1 / 2;
    v[3] -= j.d2 / 2;
  }
  return v;
}

Riemann riemann_fd(const PeteanMetric& m, const Vec4& x, double step) {
  const Christoffel g0 = christoffel_fd(m, x, step);
  std::array<Christoffel, 4> dgam;
  for (int c = 0; c < 4; ++c) {
    const Christoffel p = christoffel_fd(m, shifted(x, c, step), step);
    const Christoffel q = christoffel_fd(m, shifted(x, c, -step), step);
    for (int a = 0; a < 4; ++a) dgam[c][a] = (p[a] - q[a]) / (2 * step);
  }
  Riemann r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Mat4& rab = r[a][b];
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = dgam[c][a](d, b) - dgam[d][a](c, b);
          for (int e = 0; e < 4; ++e) v += g0[a](c, e) * g0[e](d, b) - g0[a](d, e) * g0[e](c, b);
          rab(c, d) = v;
        }
    }
  return r;
}

AsdConnection asd_connection(const PeteanMetric& m, const Vec4& x, double step, FrameScale scale) {
  const Christoffel gam = christoffel_fd(m, x, step);
  const auto base = bivector_frame(orthonormal_frame(m, x, scale).e);
  Eigen::Matrix<double, 16, 6> basis;
  for (int c = 0; c < 6; ++c) basis.col(c) = Eigen::Map<const Eigen::Matrix<double, 16, 1>>(base[c].data());
  const auto solver = basis.colPivHouseholderQr();

  AsdConnection out;
  for (int k = 0; k < 4; ++k) {
    const auto plus = bivector_frame(orthonormal_frame(m, shifted(x, k, step), scale).e);
    const auto minus = bivector_frame(orthonormal_frame(m, shifted(x, k, -step), scale).e);
    Mat4 gk;  // gk(mu, lambda) = Gamma^mu_{k lambda}
    for (int mu = 0; mu < 4; ++mu) gk.row(mu) = gam[mu].row(k);
    for (int a = 0; a < 3; ++a) {
      const Mat4 d = (plus[a] - minus[a]) / (2 * step) + gk * base[a] + base[a] * gk.transpose();
      const Eigen::Matrix<double, 6, 1> c =
          solver.solve(Eigen::Map<const Eigen::Matrix<double, 16, 1>>(d.data()));
      for (int b = 0; b < 3; ++b) out.omega[k](a, b) = c[b];
      out.norm = std::max(out.norm, c.head<3>().cwiseAbs().maxCoeff());
      out.leak = std::max(out.leak, c.tail<3>().cwiseAbs().maxCoeff());
    }
  }
  return out;
}

std::string CurvatureReport::csv_row() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.6e,%.6e,%.6e,%.6e", x[0], x[1], x[2], x[3],
                riemann_max, gamma_dev, asd_norm, harmonic_residual);
  return buf;
}

CurvatureReport curvature_report(const PeteanMetric& m, const Vec4& x, double step) {
  CurvatureReport rep;
  rep.x = x;
  const Riemann r = riemann_fd(m, x, step);
  for (const auto& ra : r)
    for (const auto& rab : ra) rep.riemann_max = std::max(rep.riemann_max, rab.cwiseAbs().maxCoeff());
  const Christoffel ex = christoffel_exact(m, x), fd = christoffel_fd(m, x, step);
  for (int k = 0; k < 4; ++k) rep.gamma_dev = std::max(rep.gamma_dev, (ex[k] - fd[k]).cwiseAbs().maxCoeff());
  rep.asd_norm = asd_connection(m, x, step).norm;
  rep.harmonic_residual = std::abs(m.jet(x[0], x[1]).laplacian());
  return rep;
}

SingularExpansion singular_expansion(const RadialProfile& f, const Vec4& u) {
  if (u[1] == 0) throw DomainError("u2 = 0: chart transition undefined");
  if (u[1] > 0) throw DomainError("u2 > 0 lies in D-, the expansion is stated for D+");
  SingularExpansion s;
  s.r = std::hypot(u[1], u[2]);
  if (!(s.r < 0.1)) throw std::invalid_argument("singular expansion needs r = |(u2,u3)| < 0.1");
  s.phi = std::atan2(u[2], u[1]);
  const double r = s.r, c = std::cos(s.phi), sn = std::sin(s.phi), tn = sn / c, u1 = u[0], u4 = u[3];

  // d(u1,u2,u3,u4)/d(u1,r,phi,u4)
  Mat4 p = Mat4::Zero();
  p(0, 0) = 1;
  p(1, 1) = c;
  p(1, 2) = -r * sn;
  p(2, 1) = sn;
  p(2, 2) = r * c;
  p(3, 3) = 1;

  const Vec4 x = u_to_dplus(u);
  const Mat4 jac = u_to_dplus_jacobian(u) * p;
  const PeteanMetric m = PeteanMetric::radial(f);
  s.scaled = u[1] * u[1] * (jac.transpose() * metric_tensor(m, x) * jac);

  Mat4 su = Mat4::Zero();
  su(0, 2) = su(2, 0) = su(1, 3) = su(3, 1) = 1;
  s.standard = p.transpose() * su * p;

  Eigen::Vector4d w(sn, 0, 0, c), ephi(0, 0, 1, 0);
  const double fl = f.value(std::hypot(u1 * tn - u4, tn));
  s.leading = r * r * fl * ((1 + u1 * u1) * ephi * ephi.transpose() + w * w.transpose());
  const double fe = f.value(std::hypot(-u1 * tn - u4, tn)), sec = 1 / c;
  s.exact = r * r * fe *
            ((1 + u1 * u1) * sec * sec * ephi * ephi.transpose() + w * w.transpose() +
             u1 * sec * (ephi * w.transpose() + w * ephi.transpose()));
  s.residual = (s.scaled - s.standard - s.leading).cwiseAbs().maxCoeff();
  s.exact_residual = (s.scaled - s.standard - s.exact).cwiseAbs().maxCoeff();
  return s;
}

double singular_expansion_residual(const RadialProfile& f, const Vec4& u) {
  return singular_expansion(f, u).residual;
}

}  // namespace zoll
