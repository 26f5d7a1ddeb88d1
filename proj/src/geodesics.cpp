#include "zoll/geodesics.hpp"

#include <cmath>
#include <cstdio>

namespace zoll {

namespace {

double rhs(const RadialProfile& f, double s, double c1) { return 0.5 * f.jet(s, c1).d2; }

// One side of the grid, from 0 outwards with step h (negative for s < 0).
void integrate_side(const RadialProfile& f, double c1, double h, int n, std::vector<double>& nu,
                    std::vector<double>& dnu) {
  nu.assign(n + 1, 0.0);
  dnu.assign(n + 1, 0.0);
  double y = 0, v = 0;
  for (int i = 0; i < n; ++i) {
    const double s = i * h;
    const double k1v = rhs(f, s, c1), k1y = v;
    const double k2v = rhs(f, s + 0.5 * h, c1), k2y = v + 0.5 * h * k1v;
    const double k3v = k2v, k3y = v + 0.5 * h * k2v;
    const double k4v = rhs(f, s + h, c1), k4y = v + h * k3v;
    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    nu[i + 1] = y;
    dnu[i + 1] = v;
  }
}

}  // namespace

double Nu0Solution::value(double x) const {
  if (std::abs(x) >= S) return A1 * std::abs(x) + A2;
  const double pos = (x + S) / step;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), s.size() - 2);
  const double t = pos - i, h = step;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * nu[i] + h10 * h * dnu[i] + h01 * nu[i + 1] + h11 * h * dnu[i + 1];
}

double Nu0Solution::slope(double x) const {
  if (std::abs(x) >= S) return x > 0 ? A1 : -A1;
  const double pos = (x + S) / step;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), s.size() - 2);
  const double t = pos - i, h = step;
  const double d00 = 6 * t * (t - 1) / h, d10 = (1 - t) * (1 - 3 * t);
  const double d01 = -d00, d11 = t * (3 * t - 2);
  return d00 * nu[i] + d10 * dnu[i] + d01 * nu[i + 1] + d11 * dnu[i + 1];
}

double Nu0Solution::evenness() const {
  double worst = 0;
  for (std::size_t i = 0, j = nu.size() - 1; i < j; ++i, --j) worst = std::max(worst, std::abs(nu[i] - nu[j]));
  return worst;
}

Nu0Solution solve_nu0(const RadialProfile& f, double c1, double S, double tol) {
  if (!std::isfinite(c1)) throw std::invalid_argument("c1 must be finite");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  Nu0Solution sol;
  sol.c1 = c1;
  sol.tol = tol;
  sol.R = f.is_zero() ? 0.0 : f.effective_radius();
  if (S == 0) S = sol.R > 0 ? 4 * sol.R : 1.0;
  if (!(S > 3 * sol.R)) throw std::invalid_argument("S must exceed 3 R_f = " + std::to_string(3 * sol.R));
  sol.S = S;
  const int n = std::max(1000, static_cast<int>(std::ceil(S / 2e-3)));
  sol.step = S / n;

  std::vector<double> fwd, dfwd, bwd, dbwd;
  integrate_side(f, c1, sol.step, n, fwd, dfwd);
  integrate_side(f, c1, -sol.step, n, bwd, dbwd);
  sol.s.resize(2 * n + 1);
  sol.nu.resize(2 * n + 1);
  sol.dnu.resize(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) {
    const int k = i - n;
    sol.s[i] = k * sol.step;
    sol.nu[i] = k < 0 ? bwd[-k] : fwd[k];
    sol.dnu[i] = k < 0 ? dbwd[-k] : dfwd[k];
  }

  sol.A1 = dfwd[n];
  sol.A2 = fwd[n] - sol.A1 * S;
  for (int i = 0; i <= 2 * n; ++i)
    if (std::abs(sol.s[i]) >= sol.R)
      sol.fit_residual =
          std::max(sol.fit_residual, std::abs(sol.nu[i] - (sol.A1 * std::abs(sol.s[i]) + sol.A2)));
  if (sol.fit_residual > tol)
    throw AsymptoticError("nu0 is not yet affine beyond R_f (fit residual " + std::to_string(sol.fit_residual) +
                          "); increase S");
  return sol;
}

GeodesicSpec GeodesicSpec::matched(const Nu0Solution& sol, double c2, double q1, double q2) {
  return {sol.c1, c2, q1, q2, q1, q2 + 2 * sol.A2};
}

bool GeodesicSpec::is_matched(const Nu0Solution& sol, double tol) const {
  return std::abs(q1m - q1p) <= tol && std::abs(q2m - (q2p + 2 * sol.A2)) <= tol;
}

bool GeodesicSpec::is_matched_q1_form(const Nu0Solution& sol, double tol) const {
  return std::abs(q1m - q1p) <= tol && std::abs(q2m - (q1p + 2 * sol.A1)) <= tol;
}

namespace {

void check_solution(const Nu0Solution& sol, const GeodesicSpec& spec) {
  if (sol.s.empty()) throw std::logic_error("nu0 has not been solved");
  if (sol.c1 != spec.c1) throw std::logic_error("nu0 was solved for a different c1");
}

}  // namespace

ChartPoint geodesic_point(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, Chart chart,
                          double s, const QuadratureConfig& cfg) {
  check_solution(sol, spec);
  const int sg = chart_sign(chart);
  const double q1 = sg > 0 ? spec.q1p : spec.q1m, q2 = sg > 0 ? spec.q2p : spec.q2m;
  ChartPoint p;
  p.chart = chart;
  p.coords = {s, spec.c1, spec.c2 - sg * varphi(f, s, spec.c1, 0.0, cfg), sg * sol.value(s) + q1 * s + q2};
  return p;
}

Eigen::Vector4d geodesic_velocity(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                                  Chart chart, double s) {
  check_solution(sol, spec);
  const int sg = chart_sign(chart);
  const double q1 = sg > 0 ? spec.q1p : spec.q1m;
  return {1.0, 0.0, -0.5 * sg * f(s, spec.c1), sg * sol.slope(s) + q1};
}

double null_residual(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, Chart chart,
                     double s) {
  const int sg = chart_sign(chart);
  const Eigen::Vector4d v = geodesic_velocity(f, sol, spec, chart, s);
  const Mat4 g = metric_tensor(PeteanMetric::radial(f, sg, chart), {s, spec.c1, 0, 0});
  return std::abs(v.dot(g * v));
}

double geodesic_equation_residual(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                                  Chart chart, double s) {
  const int sg = chart_sign(chart);
  const PeteanMetric m = PeteanMetric::radial(f, sg, chart);
  const Vec4 x{s, spec.c1, 0, 0};
  const Eigen::Vector4d v = geodesic_velocity(f, sol, spec, chart, s);
  const Jet2 j = m.jet(s, spec.c1);
  // the second derivative of the curve, with nu0'' from its equation
  Eigen::Vector4d a(0, 0, -0.5 * j.d1, sg * rhs(f, s, spec.c1));
  const Christoffel gam = christoffel_exact(m, x);
  for (int k = 0; k < 4; ++k) a[k] += v.dot(gam[k] * v);
  return (a - (a.dot(v) / v.squaredNorm()) * v).norm();
}

ChartPoint rotate_point(const ChartPoint& p, double angle) {
  chart_sign(p.chart);
  const double c = std::cos(angle), s = std::sin(angle);
  ChartPoint q = p;
  const auto& x = p.coords;
  q.coords = {c * x[0] - s * x[1], s * x[0] + c * x[1], c * x[2] - s * x[3], s * x[2] + c * x[3]};
  q.fiber.reset();
  return q;
}

namespace {

// Value and first derivative at 0 of the polynomial through (u_i, v_i).
std::pair<double, double> extrapolate(const std::vector<double>& u, const std::vector<double>& v, std::size_t k) {
  const double scale = std::abs(u.front());
  Eigen::MatrixXd a(k, k);
  Eigen::VectorXd b(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double t = u[i] / scale;
    double p = 1;
    for (std::size_t j = 0; j < k; ++j, p *= t) a(i, j) = p;
    b[i] = v[i];
  }
  const Eigen::VectorXd c = a.fullPivLu().solve(b);
  return {c[0], c[1] / scale};
}

struct SideFit {
  std::vector<Vec4> value, slope;  // per refinement level k = 2..n
};

SideFit side_fit(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, Chart chart, int sign_s,
                 int junction, int n, const QuadratureConfig& cfg) {
  const double ref = junction == 1 ? 0.0 : M_PI;
  std::vector<double> us;
  std::array<std::vector<double>, 4> vs;
  for (int i = 0; i < n; ++i) {
    const double mag = 1e-2 * std::pow(1e-2, static_cast<double>(i) / (n - 1));
    const double s = sign_s / mag;
    const ChartPoint w = transition(geodesic_point(f, sol, spec, chart, s, cfg), Chart::W);
    us.push_back(-1.0 / s);
    vs[0].push_back(ref + std::remainder(w.coords[0] - ref, 2 * M_PI));
    for (int c = 1; c < 4; ++c) vs[c].push_back(w.coords[c]);
  }
  SideFit out;
  for (int k = 2; k <= n; ++k) {
    Vec4 val{}, der{};
    for (int c = 0; c < 4; ++c) std::tie(val[c], der[c]) = extrapolate(us, vs[c], k);
    out.value.push_back(val);
    out.slope.push_back(der);
  }
  return out;
}

JunctionReport junction_report(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                               int junction, int n, const QuadratureConfig& cfg) {
  // junction 1: D+ at s -> +inf meets D- at s -> -inf; junction 2 the reverse
  const int plus_sign = junction == 1 ? 1 : -1;
  const SideFit p = side_fit(f, sol, spec, Chart::DPlus, plus_sign, junction, n, cfg);
  const SideFit m = side_fit(f, sol, spec, Chart::DMinus, -plus_sign, junction, n, cfg);
  JunctionReport r;
  r.junction = junction;
  for (std::size_t k = 0; k < p.value.size(); ++k) {
    double vg = 0, sg = 0;
    for (int c = 0; c < 4; ++c) {
      vg = std::max(vg, std::abs(p.value[k][c] - m.value[k][c]));
      sg = std::max(sg, std::abs(p.slope[k][c] - m.slope[k][c]));
    }
    r.refinement.push_back(std::max(vg, sg));
    r.value_gap = vg;
    r.slope_gap = sg;
  }
  r.value_plus = p.value.back();
  r.value_minus = m.value.back();
  r.slope_plus = p.slope.back();
  r.slope_minus = m.slope.back();
  return r;
}

}  // namespace

ClosureReport closure_report(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                             int n_samples, const QuadratureConfig& cfg) {
  check_solution(sol, spec);
  if (n_samples < 2) throw std::invalid_argument("closure needs at least 2 samples per side");
  ClosureReport r;
  r.first = junction_report(f, sol, spec, 1, n_samples, cfg);
  r.second = junction_report(f, sol, spec, 2, n_samples, cfg);
  r.gap = std::max(r.first.gap(), r.second.gap());
  return r;
}

double closure_gap(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, int n_samples,
                   const QuadratureConfig& cfg) {
  return closure_report(f, sol, spec, n_samples, cfg).gap;
}

std::pair<GrassPoint, GrassPoint> fiber_line_ends(double a, double b, double sigma, double T) {
  auto end = [&](double dir) {
    const ChartPoint p{Chart::DPlus, {a, b, -dir * T * std::sin(sigma), dir * T * std::cos(sigma)}, {}};
    Mat42 m = embed(p).matrix();
    m.col(1) /= T;
    m.col(0) -= m.col(1) * (m.col(0).dot(m.col(1)) / m.col(1).squaredNorm());
    return GrassPoint(m);
  };
  return {end(-1.0), end(1.0)};
}

double plane_distance(const GrassPoint& a, const GrassPoint& b) {
  auto basis = [](const GrassPoint& g) {
    Mat42 q = g.matrix();
    q.col(0).normalize();
    q.col(1) -= q.col(0) * q.col(0).dot(q.col(1));
    q.col(1).normalize();
    return q;
  };
  const Mat42 qa = basis(a), qb = basis(b);
  if ((qa.transpose() * qb).determinant() <= 0) return 2.0;
  return (qa * qa.transpose() - qb * qb.transpose()).norm();
}

std::string class_name(GeodesicClass c) {
  switch (c) {
    case GeodesicClass::Closed: return "closed";
    case GeodesicClass::FiberLine: return "ends-at-singular-surface";
    default: return "unclassified";
  }
}

json ScanEntry::to_json() const {
  json j{{"c1", c1}, {"class", class_name(cls)}, {"gap", gap}};
  j["q1"] = q1 ? json(*q1) : json(nullptr);
  return j;
}

json ScanReport::to_json() const {
  json e = json::array();
  for (const auto& x : entries) e.push_back(x.to_json());
  return {{"entries", e}, {"closed", closed}, {"fiber", fiber}, {"failures", failures}};
}

namespace {

ScanEntry scan_closed(const RadialProfile& f, const Nu0Solution& sol, double q1, double tol,
                      const QuadratureConfig& cfg) {
  ScanEntry e;
  e.c1 = sol.c1;
  e.q1 = q1;
  const double c2 = 0.25;
  // Signed first-junction mismatch of eps1 (value, slope); affine in (q1m, q2m).
  auto mismatch = [&](double q1m, double q2m) {
    const GeodesicSpec spec{sol.c1, c2, q1, 0.0, q1m, q2m};
    const JunctionReport r = junction_report(f, sol, spec, 1, 5, cfg);
    return Eigen::Vector2d(r.value_plus[2] - r.value_minus[2], r.slope_plus[2] - r.slope_minus[2]);
  };
  const Eigen::Vector2d m0 = mismatch(0, 0);
  Eigen::Matrix2d jac;
  jac.col(0) = mismatch(1, 0) - m0;
  jac.col(1) = mismatch(0, 1) - m0;
  const Eigen::Vector2d q = jac.fullPivLu().solve(-m0);
  const GeodesicSpec fitted{sol.c1, c2, q1, 0.0, q[0], q[1]};
  e.q2m_fit = q[1];
  e.q2m_expected = 2 * sol.A2;
  e.gap = closure_gap(f, sol, fitted, 5, cfg);
  e.cls = e.gap < tol ? GeodesicClass::Closed : GeodesicClass::Unclassified;
  return e;
}

ScanEntry scan_fiber(double c1, double tol) {
  ScanEntry e;
  e.c1 = c1;
  const auto ends = fiber_line_ends(0.5, c1, 0.0);
  const auto expect = surface_endpoints({0.0, c1, 0.0});
  const double direct = std::max(plane_distance(ends.first, expect.first), plane_distance(ends.second, expect.second));
  const double swapped =
      std::max(plane_distance(ends.first, expect.second), plane_distance(ends.second, expect.first));
  e.gap = std::max(std::min(direct, swapped), plane_distance(ends.second, antipodal(ends.first)));
  e.cls = e.gap < std::max(tol, 1e-6) ? GeodesicClass::FiberLine : GeodesicClass::Unclassified;
  return e;
}

}  // namespace

ScanReport zollfrei_scan(const RadialProfile& f, const std::vector<double>& c1s, const std::vector<double>& q1s,
                         double tol, const QuadratureConfig& cfg, Exec ex) {
  std::vector<Nu0Solution> sols(c1s.size());
  for_each_index(ex, c1s.size(), [&](std::size_t i) { sols[i] = solve_nu0(f, c1s[i]); });
  const std::size_t cells = c1s.size() * q1s.size();
  ScanReport rep;
  rep.entries.resize(cells + c1s.size());
  for_each_index(ex, rep.entries.size(), [&](std::size_t i) {
    if (i < cells)
      rep.entries[i] = scan_closed(f, sols[i / q1s.size()], q1s[i % q1s.size()], tol, cfg);
    else
      rep.entries[i] = scan_fiber(c1s[i - cells], tol);
  });
  for (const auto& e : rep.entries) {
    if (e.cls == GeodesicClass::Closed) ++rep.closed;
    else if (e.cls == GeodesicClass::FiberLine) ++rep.fiber;
    else ++rep.failures;
  }
  return rep;
}

std::string trace_csv_header() { return "branch,s,x1,x2,x3,x4"; }

std::string trace_csv(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                      const std::vector<double>& s_values, const QuadratureConfig& cfg) {
  std::string out;
  char buf[160];
  for (Chart ch : {Chart::DPlus, Chart::DMinus})
    for (double s : s_values) {
      const auto x = geodesic_point(f, sol, spec, ch, s, cfg).coords;
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", chart_name(ch).c_str(), s, x[0], x[1],
                    x[2], x[3]);
      out += buf;
    }
  return out;
}

}  // namespace zoll
