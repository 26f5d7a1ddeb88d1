#include "zoll/charts.hpp"

#include <cmath>

namespace zoll {

namespace {

double scale_of(const Mat42& m) { return std::max(m.cwiseAbs().maxCoeff(), 1e-300); }

double minor2(const Mat42& m, int a, int b) { return m(a, 0) * m(b, 1) - m(a, 1) * m(b, 0); }

void require_finite(const Vec4& c) {
  for (double v : c)
    if (!std::isfinite(v)) throw DomainError("chart coordinates must be finite");
}

void check_fiber(const ChartPoint& p) {
  if (!p.fiber) return;
  const double im = p.fiber->imag();
  if (p.chart == Chart::DMinus ? im > 0 : im < 0)
    throw DomainError("fiber coordinate in the wrong half-plane for chart " + chart_name(p.chart));
}

ChartPoint d_to_w(const ChartPoint& p) {
  const auto& x = p.coords;
  const double rho = std::hypot(x[0], x[1]);
  if (rho == 0) throw DomainError("x1 = x2 = 0 is a pole, outside the band W");
  const bool plus = p.chart == Chart::DPlus;
  const double c = (plus ? x[0] : -x[0]) / rho, s = (plus ? x[1] : -x[1]) / rho;
  const double t = (plus ? 1 : -1) / rho;
  ChartPoint w;
  w.chart = Chart::W;
  w.coords = {std::atan2(s, c), std::atan(t), t * (-s * x[2] + c * x[3]), -c * x[2] - s * x[3]};
  if (p.fiber) {
    const cplx z = *p.fiber;
    const cplx den = t * (z * c - s);
    if (std::abs(den) == 0) throw DomainError("fiber point maps to xi = infinity");
    w.fiber = -(c + z * s) / den;
  }
  return w;
}

ChartPoint w_to_d(const ChartPoint& p, Chart target) {
  const double alpha = p.coords[0], beta = p.coords[1], e1 = p.coords[2], e2 = p.coords[3];
  if (!(std::abs(beta) < M_PI / 2)) throw DomainError("beta must lie strictly inside (-pi/2, pi/2)");
  if (beta == 0) throw DomainError("beta = 0 is the equator, outside D+ and D-");
  if ((beta > 0) != (target == Chart::DPlus))
    throw DomainError("sign of beta does not match chart " + chart_name(target));
  const double c = std::cos(alpha), s = std::sin(alpha), t = std::tan(beta), ct = 1 / t;
  ChartPoint d;
  d.chart = target;
  d.coords = {c * ct, s * ct, -e1 * s * ct - e2 * c, e1 * c * ct - e2 * s};
  if (p.fiber) {
    const cplx xi = *p.fiber;
    const cplx den = xi * c * t + s;
    if (std::abs(den) == 0) throw DomainError("fiber point maps to zeta = infinity");
    d.fiber = (xi * s * t - c) / den;
  }
  return d;
}

}  // namespace

std::string chart_name(Chart c) {
  switch (c) {
    case Chart::DPlus: return "Dplus";
    case Chart::DMinus: return "Dminus";
    case Chart::W: return "W";
  }
  return "?";
}

Chart chart_from_name(const std::string& s) {
  if (s == "Dplus") return Chart::DPlus;
  if (s == "Dminus") return Chart::DMinus;
  if (s == "W") return Chart::W;
  throw std::invalid_argument("unknown chart '" + s + "'");
}

json ChartPoint::to_json() const {
  json j = {{"chart", chart_name(chart)}, {"coords", coords}};
  if (fiber) j["fiber"] = {fiber->real(), fiber->imag()};
  return j;
}

ChartPoint ChartPoint::from_json(const json& j) {
  ChartPoint p;
  p.chart = chart_from_name(j.at("chart").get<std::string>());
  p.coords = j.at("coords").get<Vec4>();
  if (j.contains("fiber")) {
    const auto f = j["fiber"].get<std::array<double, 2>>();
    p.fiber = cplx(f[0], f[1]);
  }
  return p;
}

GrassPoint::GrassPoint(const Mat42& m) : m_(m) {
  if (!m.allFinite()) throw std::invalid_argument("Grassmannian matrix has non-finite entries");
  const double sc = scale_of(m);
  double best = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) best = std::max(best, std::abs(minor2(m, a, b)));
  if (best <= 1e-13 * sc * sc) throw std::invalid_argument("Grassmannian matrix has rank below 2");
}

GrassPoint::NormalForm GrassPoint::normal_form() const {
  int ra = 0, rb = 1;
  double best = -1;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (std::abs(minor2(m_, a, b)) > best) {
        best = std::abs(minor2(m_, a, b));
        ra = a;
        rb = b;
      }
  return normal_form(ra, rb);
}

GrassPoint::NormalForm GrassPoint::normal_form(int row_a, int row_b) const {
  Eigen::Matrix2d block;
  block << m_(row_a, 0), m_(row_a, 1), m_(row_b, 0), m_(row_b, 1);
  const double det = block.determinant();
  if (det == 0) throw DomainError("pivot block is singular");
  NormalForm nf;
  nf.row_a = row_a;
  nf.row_b = row_b;
  nf.reduced = m_ * block.inverse();
  nf.orientation = det > 0 ? 1 : -1;
  return nf;
}

bool GrassPoint::same_class(const GrassPoint& other, double tol) const {
  const NormalForm a = normal_form();
  const double sc = scale_of(other.m_);
  if (std::abs(minor2(other.m_, a.row_a, a.row_b)) <= 1e-10 * sc * sc) return false;
  const NormalForm b = other.normal_form(a.row_a, a.row_b);
  if (a.orientation != b.orientation) return false;
  const double size = 1 + a.reduced.cwiseAbs().maxCoeff();
  return (a.reduced - b.reduced).cwiseAbs().maxCoeff() <= tol * size;
}

bool GrassPoint::at_infinity(double tol) const {
  return std::max(std::abs(m_(3, 0)), std::abs(m_(3, 1))) <= tol * scale_of(m_);
}

json GrassPoint::to_json() const {
  json a = json::array();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 2; ++k) a.push_back(m_(i, k));
  return a;
}

GrassPoint GrassPoint::from_json(const json& j) {
  if (!j.is_array() || j.size() != 8) throw std::invalid_argument("GrassPoint JSON must be 8 numbers");
  Mat42 m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 2; ++k) m(i, k) = j[2 * i + k].get<double>();
  return GrassPoint(m);
}

GrassPoint embed(const ChartPoint& p) {
  if (p.fiber) throw DomainError("embed takes a point of TS^2, not of the disk bundle");
  require_finite(p.coords);
  const auto& c = p.coords;
  Mat42 m;
  switch (p.chart) {
    case Chart::DPlus:
    case Chart::DMinus: {
      const double s = p.chart == Chart::DPlus ? 1 : -1;
      m << s * c[0], -c[3], s * c[1], c[2], s, 0, 0, 1;
      break;
    }
    case Chart::W: {
      if (!(std::abs(c[1]) < M_PI / 2)) throw DomainError("beta must lie strictly inside (-pi/2, pi/2)");
      const double ca = std::cos(c[0]), sa = std::sin(c[0]);
      m << ca, c[3] * sa, sa, -c[3] * ca, std::tan(c[1]), c[2], 0, 1;
      break;
    }
  }
  return GrassPoint(m);
}

GrassPoint infinity_point(const Vec3& t, const Vec3& v) {
  const double tt = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
  const double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const double tv = t[0] * v[0] + t[1] * v[1] + t[2] * v[2];
  if (std::abs(tt - 1) > 1e-10 || std::abs(vv - 1) > 1e-10 || std::abs(tv) > 1e-10)
    throw std::invalid_argument("infinity_point needs unit t and unit v orthogonal to t");
  Mat42 m;
  m << t[0], -v[0], t[1], -v[1], t[2], -v[2], 0, 0;
  return GrassPoint(m);
}

GrassPoint antipodal(const GrassPoint& g) {
  Mat42 m = g.matrix();
  m.col(0).swap(m.col(1));
  return GrassPoint(m);
}

std::variant<ChartPoint, InfinityTag> normalize(const GrassPoint& g, Chart chart) {
  const Mat42& a = g.matrix();
  if (g.at_infinity()) {
    const Eigen::Vector3d c0 = a.col(0).head<3>(), c1 = a.col(1).head<3>();
    const Eigen::Vector3d t = c0.normalized();
    const Eigen::Vector3d w = c1 - c1.dot(t) * t;
    const Eigen::Vector3d v = -w.normalized();
    return InfinityTag{{t[0], t[1], t[2]}, {v[0], v[1], v[2]}};
  }
  ChartPoint p;
  p.chart = chart;
  const double sc = scale_of(a);
  if (chart == Chart::W) {
    const double lp = a(3, 0), lq = a(3, 1);
    const Eigen::Vector4d v0 = lq * a.col(0) - lp * a.col(1);
    const Eigen::Vector4d w = (lp * a.col(0) + lq * a.col(1)) / (lp * lp + lq * lq);
    const double rho = std::hypot(v0[0], v0[1]);
    if (rho <= 1e-14 * sc * std::abs(v0[2])) throw DomainError("plane lies over a pole, outside the band W");
    const double ca = v0[0] / rho, sa = v0[1] / rho;
    const double lam = w[0] * ca + w[1] * sa;
    const Eigen::Vector4d wp = w - lam * v0 / rho;
    p.coords = {std::atan2(sa, ca), std::atan2(v0[2], rho), wp[2], wp[0] * sa - wp[1] * ca};
    return p;
  }
  const double det = minor2(a, 2, 3);
  if (std::abs(det) <= 1e-14 * sc * sc) throw DomainError("plane lies over the equator, outside D+ and D-");
  if ((det > 0) != (chart == Chart::DPlus))
    throw DomainError("plane lies in the other hemisphere than chart " + chart_name(chart));
  const GrassPoint::NormalForm nf = g.normal_form(2, 3);
  // Reducing the D- display by its pivot block diag(-1,1) gives the same
  // reduced matrix as D+, so one read-out serves both charts.
  const Mat42& n = nf.reduced;
  p.coords = {n(0, 0), n(1, 0), n(1, 1), -n(0, 1)};
  return p;
}

std::variant<ChartPoint, InfinityTag> normalize_any(const GrassPoint& g) {
  for (Chart c : {Chart::DPlus, Chart::DMinus, Chart::W}) {
    try {
      return normalize(g, c);
    } catch (const DomainError&) {
    }
  }
  throw std::runtime_error("plane with nonzero last row lies in no chart; the matrix is rank deficient");
}

ChartPoint transition(const ChartPoint& p, Chart target) {
  require_finite(p.coords);
  check_fiber(p);
  if (p.chart == target) return p;
  if (target == Chart::W) return d_to_w(p);
  if (p.chart == Chart::W) return w_to_d(p, target);
  return w_to_d(d_to_w(p), target);
}

GrassPoint u_chart_point(const Vec4& u) {
  Mat42 m;
  m << u[0], -u[3], 1, 0, 0, 1, u[1], u[2];
  return GrassPoint(m);
}

Vec4 u_to_dplus(const Vec4& u) {
  if (u[1] == 0) throw DomainError("u2 = 0: the U-chart point lies on the sphere at infinity");
  if (u[1] > 0) throw DomainError("u2 > 0: the U-chart point lies in D-, not D+");
  return {-(u[0] * u[2] + u[1] * u[3]) / u[1], -u[2] / u[1], 1 / u[1], -u[0] / u[1]};
}

Eigen::Matrix4d u_to_dplus_jacobian(const Vec4& u) {
  if (u[1] >= 0) throw DomainError("u2 must be negative");
  const double u1 = u[0], u2 = u[1], u3 = u[2], q = u2 * u2;
  Eigen::Matrix4d j;
  j << -u3 / u2, u1 * u3 / q, -u1 / u2, -1,
      0, u3 / q, -1 / u2, 0,
      0, -1 / q, 0, 0,
      -1 / u2, u1 / q, 0, 0;
  return j;
}

}  // namespace zoll
