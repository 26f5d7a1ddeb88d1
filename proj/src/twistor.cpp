#include "zoll/twistor.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>

#include "zoll/transforms.hpp"

namespace zoll {

namespace {

constexpr cplx I{0.0, 1.0};

double grid_end(const QuadratureConfig& cfg, double cutoff) { return cfg.truncation_multiplier * cutoff + 5.0; }

// FFTW planning is not thread safe; execution on a private buffer is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Odd bins 2l+1 (frequency l + 1/2) of g sampled at 8L points of [0, 4 pi).
template <class G>
std::vector<cplx> half_integer_bins(G&& g, int L) {
  const int n = 8 * L;
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> buf(fftw_alloc_complex(n), &fftw_free);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int j = 0; j < n; ++j) {
    const cplx v = g(4 * M_PI * j / n);
    buf.get()[j][0] = v.real();
    buf.get()[j][1] = v.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<cplx> c(L + 1);
  for (int l = 0; l <= L; ++l) c[l] = cplx(buf.get()[2 * l + 1][0], buf.get()[2 * l + 1][1]) / double(n);
  return c;
}

void check_order(int L) {
  if (L < 8 || (L & (L - 1)) != 0) throw std::invalid_argument("truncation order must be a power of two >= 8");
}

double mu_of(cplx a, double theta) { return 2 * (a * std::exp(-0.5 * I * theta)).real(); }

FourierCoeffs finish(cplx a, int L, std::vector<cplx> c) {
  FourierCoeffs k{a, L, std::move(c)};
  if (k.tail_ratio() >= 1e-10)
    throw AliasingError("half-integer coefficients not resolved at L = " + std::to_string(L) +
                        " (tail ratio " + std::to_string(k.tail_ratio()) + ")");
  return k;
}

// sum_l c_l w^{l+1}
cplx power_sum(const std::vector<cplx>& c, cplx w) {
  cplx p{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * w + *it;
  return p * w;
}

// sum_l conj(c_l) w^{l+1}
cplx conj_power_sum(const std::vector<cplx>& c, cplx w) {
  cplx p{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * w + std::conj(*it);
  return p * w;
}

TwistorPoint from_gz(cplx omega, cplx g2, cplx g3) {
  return TwistorPoint::from({(1.0 - omega) / (2.0 * I), (1.0 + omega) / 2.0, g2, g3});
}

// Exterior disks in eta = 1/omega, with z2 - i z1 = 1.
TwistorPoint from_gz_exterior(cplx eta, cplx g2, cplx g3) {
  return TwistorPoint::from({(eta - 1.0) / (2.0 * I), (eta + 1.0) / 2.0, g2, g3});
}

double wrap_angle(double a) {
  a = std::fmod(a, 2 * M_PI);
  return a < 0 ? a + 2 * M_PI : a;
}

}  // namespace

OddProfile f_to_h(const RadialProfile& f, const QuadratureConfig& cfg, Exec ex) {
  cfg.validate();
  if (f.is_zero()) return OddProfile();
  const double step = 1.0 / (2 * cfg.panels);
  const std::size_t n = static_cast<std::size_t>(std::ceil(grid_end(cfg, f.cutoff()) / step));
  const RadialProfile fhat = radon_table(f, cfg, step, ex);
  const LineProfile line{[&fhat](double mu) { return cplx(fhat.value(mu), 0.0); }, f.cutoff()};
  std::vector<double> ts(n + 1);
  for (std::size_t j = 0; j <= n; ++j) ts[j] = step * j;
  const std::vector<cplx> hv = hilbert_sweep(line, ts, cfg, ex);
  std::vector<double> s(n + 1);
  for (std::size_t j = 0; j <= n; ++j) s[j] = 0.25 * hv[j].imag();
  return OddProfile::tabulated(step, std::move(s), f.cutoff());
}

RadialProfile h_to_f(const OddProfile& h, const QuadratureConfig& cfg, Exec ex) {
  cfg.validate();
  if (h.is_zero()) return RadialProfile();
  const double step = 1.0 / (2 * cfg.panels);
  const std::size_t n = static_cast<std::size_t>(std::ceil(grid_end(cfg, h.cutoff()) / step));
  const LineFunction dh = LineFunction::of_mu([&h](double mu) { return 2.0 * I * h.dh(mu); }, true);
  std::vector<double> v(n + 1);
  for_each_index(ex, n + 1, [&](std::size_t j) { v[j] = dual_radon(dh, step * j, 0.0, cfg).real(); });
  return RadialProfile::tabulated(step, std::move(v), h.cutoff());
}

double radial_relative_error(const RadialProfile& a, const RadialProfile& b, double r_max, double dr) {
  double err = 0, scale = 0;
  for (double r = 0; r <= r_max + 1e-12; r += dr) {
    err = std::max(err, std::abs(a.value(r) - b.value(r)));
    scale = std::max(scale, std::abs(b.value(r)));
  }
  return scale > 0 ? err / scale : err;
}

double odd_relative_error(const OddProfile& a, const OddProfile& b, double t_max, double dt) {
  double err = 0, scale = 0;
  for (double t = 0; t <= t_max + 1e-12; t += dt) {
    err = std::max(err, std::abs(a.s(t) - b.s(t)));
    scale = std::max(scale, std::abs(b.s(t)));
  }
  return scale > 0 ? err / scale : err;
}

cplx FourierCoeffs::reconstruct(double theta) const {
  cplx v{};
  for (int l = 0; l <= L; ++l) {
    const cplx e = std::exp(I * (theta * (l + 0.5)));
    v += c[l] * e - std::conj(c[l]) / e;
  }
  return v;
}

double FourierCoeffs::tail_ratio() const {
  double m = 0;
  for (const cplx& x : c) m = std::max(m, std::abs(x));
  return m > 0 ? std::abs(c.back()) / m : 0.0;
}

FourierCoeffs fourier_coeffs(const OddProfile& h, cplx a, int L) {
  check_order(L);
  if (h.is_zero() || a == 0.0) return FourierCoeffs{a, L, std::vector<cplx>(L + 1)};
  return finish(a, L, half_integer_bins([&](double th) { return h.h(mu_of(a, th)); }, L));
}

FourierCoeffs fourier_coeffs_auto(const OddProfile& h, cplx a, int L0, int L_max) {
  for (int L = L0;; L *= 2) {
    try {
      return fourier_coeffs(h, a, L);
    } catch (const AliasingError&) {
      if (2 * L > L_max) throw;
    }
  }
}

std::pair<FourierCoeffs, FourierCoeffs> fourier_coeff_gradient(const OddProfile& h, cplx a, int L0, int L_max) {
  check_order(L0);
  if (h.is_zero()) return {FourierCoeffs{a, L0, std::vector<cplx>(L0 + 1)}, FourierCoeffs{a, L0, std::vector<cplx>(L0 + 1)}};
  for (int L = L0;; L *= 2) {
    try {
      // mu = x1 sin(theta/2) - x2 cos(theta/2)
      auto d1 = half_integer_bins([&](double th) { return h.dh(mu_of(a, th)) * std::sin(0.5 * th); }, L);
      auto d2 = half_integer_bins([&](double th) { return -h.dh(mu_of(a, th)) * std::cos(0.5 * th); }, L);
      return {finish(a, L, std::move(d1)), finish(a, L, std::move(d2))};
    } catch (const AliasingError&) {
      if (2 * L > L_max) throw;
    }
  }
}

cplx F_series(const FourierCoeffs& k, cplx omega) {
  if (std::abs(omega) > 1 + 1e-12) throw DomainError("F_series needs |omega| <= 1");
  if (std::abs(1.0 - omega) < 1e-14)
    throw PoleError("F has a pole at omega = 1; use boundary_disk_point for the boundary circle");
  return 4.0 * I / (1.0 - omega) * power_sum(k.c, omega);
}

cplx F_exterior(const FourierCoeffs& k, cplx omega) {
  if (std::abs(omega) < 1 - 1e-12) throw DomainError("F_exterior needs |omega| >= 1");
  return -std::conj(F_series(k, 1.0 / std::conj(omega)));
}

cplx omega_of_zeta(cplx zeta) { return (zeta - I) / (zeta + I); }

cplx disk_center(double x1, double x2) { return 0.5 * I * cplx(x1, x2); }

cplx G_cauchy(const OddProfile& h, cplx xi, const QuadratureConfig& cfg) {
  cfg.validate();
  if (xi.imag() < 0) throw DomainError("G is defined on Im xi >= 0");
  if (h.is_zero()) return 0.0;
  const double x = xi.real(), y = xi.imag();
  if (y == 0) {
    const LineProfile line{[&h](double mu) { return h.h(mu); }, h.cutoff()};
    return h.h(x) - hilbert(line, x, cfg);
  }
  // The h(x)/(mu - xi) part over the window is done in closed form so the
  // near-pole peak of width y is left with a bounded integrand.
  const double w = grid_end(cfg, h.cutoff()) + std::abs(x);
  const cplx hx = h.h(x);
  auto inner = [&](double mu) { return (h.h(mu) - hx) / (mu - xi); };
  double mass = 0;
  cplx total = integrate_segments(inner, {x - w, x - std::min(1.0, w), x, x + std::min(1.0, w), x + w}, cfg, 0.0, &mass);
  total += hx * std::log(cplx(w, -y) / cplx(-w, -y));
  auto right = [&](double mu) { return h.h(mu) / (mu - xi); };
  auto left = [&](double u) { return h.h(-u) / (-u - xi); };
  total += integrate_to_infinity(right, x + w, w, cfg, cfg.tolerance * mass);
  total += integrate_to_infinity(left, w - x, w, cfg, cfg.tolerance * mass);
  return total / (M_PI * I);
}

TwistorPoint TwistorPoint::from(const std::array<cplx, 4>& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  if (!(std::abs(v[k]) > 0) || !std::isfinite(std::abs(v[k])))
    throw std::invalid_argument("homogeneous coordinates must be finite and not all zero");
  TwistorPoint p;
  for (std::size_t i = 0; i < 4; ++i) p.z[i] = v[i] / v[k];
  p.z[k] = 1.0;
  return p;
}

std::array<cplx, 3> TwistorPoint::gz() const {
  const cplx den = z[1] + I * z[0];
  double m = 0;
  for (const cplx& c : z) m = std::max(m, std::abs(c));
  if (std::abs(den) < 1e-14 * m) throw DomainError("point outside the (Gz) chart: z2 + i z1 = 0");
  return {(z[1] - I * z[0]) / den, z[2] / den, z[3] / den};
}

double TwistorPoint::distance(const TwistorPoint& o) const {
  double nu = 0, nv = 0;
  cplx inner{};
  for (int i = 0; i < 4; ++i) {
    nu += std::norm(z[i]);
    nv += std::norm(o.z[i]);
    inner += std::conj(o.z[i]) * z[i];
  }
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  const cplx phase = std::abs(inner) > 0 ? inner / std::abs(inner) : cplx(1.0);
  double d = 0;
  for (int i = 0; i < 4; ++i) d += std::norm(z[i] / nu - phase * o.z[i] / nv);
  return std::sqrt(d);
}

json TwistorPoint::to_json() const {
  json j = json::array();
  for (const cplx& c : z) j.push_back({c.real(), c.imag()});
  return j;
}

double p_membership_residual(const TwistorPoint& y, const OddProfile& h) {
  const auto g = y.gz();
  const double r = std::abs(g[0]);
  if (r < 0.5) return std::abs(r - 1);
  const cplx half = std::conj(std::sqrt(g[0] / r));  // e^{-i theta/2}, either root
  const cplx mu = g[1] * half;
  const cplx w = g[2] * half;
  return std::max({std::abs(r - 1), std::abs(mu.imag()), std::abs(w.imag() - h.s(mu.real()))});
}

cplx H_term(const OddProfile& h, double x1, double x2, cplx zeta) {
  const FourierCoeffs k = fourier_coeffs_auto(h, disk_center(x1, x2));
  const cplx omega = omega_of_zeta(zeta);
  return zeta.imag() >= 0 ? F_series(k, omega) : F_exterior(k, omega);
}

double holomorphy_residual(const OddProfile& h, const RadialProfile& f, double x1, double x2, cplx zeta) {
  const cplx a = disk_center(x1, x2);
  const auto [k1, k2] = fourier_coeff_gradient(h, a);
  const cplx omega = omega_of_zeta(zeta);
  const bool upper = zeta.imag() >= 0;
  const cplx d1 = upper ? F_series(k1, omega) : F_exterior(k1, omega);
  const cplx d2 = upper ? F_series(k2, omega) : F_exterior(k2, omega);
  const double sign = upper ? 1.0 : -1.0;
  return std::abs(-zeta * d1 + d2 - 0.5 * sign * f(x1, x2) * (zeta * zeta + 1.0));
}

cplx B_series(const OddProfile& h, double alpha, double beta, cplx xi) {
  if (beta == 0) throw DomainError("B_series is defined off the equator");
  const double t = std::tan(beta), c = std::cos(alpha), s = std::sin(alpha);
  const double x1 = c / t, x2 = s / t;
  const cplx d = xi * c * t + s;
  const cplx zeta = (xi * s * t - c) / d;
  return -d * H_term(h, x1, x2, zeta);
}

cplx B_integral(const OddProfile& h, double beta, cplx xi, const QuadratureConfig& cfg) {
  if (beta == 0) throw DomainError("B_integral is defined off the equator");
  if (xi.imag() <= 0) throw DomainError("B_integral needs Im xi > 0");
  const double t = std::tan(beta), cb = 1 / t;
  if (h.is_zero()) return 0.0;
  // mu = cot(beta) sin(phi) removes the square roots
  auto g = [&](double phi) { return cb * h.h(cb * std::sin(phi)) / (cb * std::sin(phi) - xi * std::cos(phi)); };
  std::vector<double> br{-M_PI / 2};
  std::vector<double> inner;
  for (double m : {32.0, 8.0, 2.0})
    if (m < std::abs(cb)) inner.push_back(std::asin(m / std::abs(cb)));
  for (double p : inner) br.push_back(-p);
  br.push_back(0.0);
  for (auto it = inner.rbegin(); it != inner.rend(); ++it) br.push_back(*it);
  br.push_back(M_PI / 2);
  return (1.0 + xi * xi * t * t) / (M_PI * I) * integrate_segments(g, br, cfg);
}

BContinuity B_continuity(const OddProfile& h, const std::vector<double>& alphas, cplx xi,
                         const std::vector<double>& betas, const QuadratureConfig& cfg) {
  if (alphas.empty() || betas.empty()) throw std::invalid_argument("B_continuity needs alphas and betas");
  BContinuity rep;
  rep.betas = betas;
  const cplx g = G_cauchy(h, xi, cfg);
  for (double beta : betas) {
    double worst = 0;
    for (double a : alphas) worst = std::max(worst, std::abs(B_series(h, a, beta, xi) - g));
    rep.residuals.push_back(worst);
  }
  const double last = betas.back();
  const cplx ref = B_series(h, alphas.front(), last, xi);
  const cplx integral = xi.imag() > 0 ? B_integral(h, last, xi, cfg) : ref;
  for (double a : alphas) {
    const cplx b = B_series(h, a, last, xi);
    rep.alpha_spread = std::max(rep.alpha_spread, std::abs(b - ref));
    rep.integral_gap = std::max(rep.integral_gap, std::abs(b - integral));
  }
  return rep;
}

std::string disk_case_name(DiskCase c) {
  switch (c) {
    case DiskCase::Interior: return "interior";
    case DiskCase::Exterior: return "exterior";
    case DiskCase::Case2: return "case2";
    case DiskCase::Infinity: return "infinity";
  }
  return "?";
}

ChartPoint DiskParams::base_point() const {
  switch (kind) {
    case DiskCase::Interior:
    case DiskCase::Exterior:
      return {kind == DiskCase::Interior ? Chart::DPlus : Chart::DMinus,
              {2 * a.imag(), -2 * a.real(), -2 * kappa.real(), -2 * kappa.imag()},
              {}};
    case DiskCase::Case2: return {Chart::W, {alpha, 0, -v1, v0}, {}};
    case DiskCase::Infinity: break;
  }
  throw DomainError("disks of the infinity family have no base point in TS^2");
}

DiskParams DiskParams::from_point(const ChartPoint& p) {
  DiskParams d;
  const auto& x = p.coords;
  if (p.chart == Chart::W) {
    if (x[1] != 0) throw DomainError("only equator points of W give case-2 disks; transition first");
    d.kind = DiskCase::Case2;
    d.alpha = x[0];
    d.v0 = x[3];
    d.v1 = -x[2];
    return d;
  }
  d.kind = p.chart == Chart::DPlus ? DiskCase::Interior : DiskCase::Exterior;
  d.a = disk_center(x[0], x[1]);
  d.kappa = -0.5 * cplx(x[2], x[3]);
  return d;
}

std::array<double, 4> DiskParams::params() const {
  switch (kind) {
    case DiskCase::Interior:
    case DiskCase::Exterior: return {a.real(), a.imag(), kappa.real(), kappa.imag()};
    case DiskCase::Case2: return {alpha, v0, v1, 0};
    case DiskCase::Infinity: return {z[0], z[1], z[2], 0};
  }
  return {};
}

TwistorPoint disk_point(const DiskParams& d, const OddProfile& h, cplx param, const QuadratureConfig& cfg) {
  switch (d.kind) {
    case DiskCase::Interior: {
      if (param.imag() < 0) throw DomainError("interior disks take Im zeta >= 0");
      const cplx omega = omega_of_zeta(param);
      const FourierCoeffs k = fourier_coeffs_auto(h, d.a);
      return from_gz(omega, d.a + std::conj(d.a) * omega,
                     d.kappa + std::conj(d.kappa) * omega + 2.0 * power_sum(k.c, omega));
    }
    case DiskCase::Exterior: {
      if (param.imag() > 0) throw DomainError("exterior disks take Im zeta <= 0");
      const cplx eta = (param + I) / (param - I);
      const FourierCoeffs k = fourier_coeffs_auto(h, d.a);
      return from_gz_exterior(eta, d.a * eta + std::conj(d.a),
                              d.kappa * eta + std::conj(d.kappa) - 2.0 * conj_power_sum(k.c, eta));
    }
    case DiskCase::Case2: {
      if (param.imag() < 0) throw DomainError("case-2 disks take Im xi >= 0");
      return TwistorPoint::from({-std::sin(d.alpha), std::cos(d.alpha), param,
                                 d.v0 + d.v1 * param + G_cauchy(h, param, cfg)});
    }
    case DiskCase::Infinity: {
      if (param.imag() < 0) throw DomainError("infinity disks take Im u >= 0");
      const double n = std::hypot(d.z[0], d.z[1]);
      if (n == 0) throw DomainError("infinity disk needs (z1, z2) != 0");
      const double z3 = d.z[2] / n;
      return TwistorPoint::from({d.z[0] / n, d.z[1] / n, z3, param + h.h(z3)});
    }
  }
  throw std::logic_error("unknown disk case");
}

TwistorPoint boundary_disk_point(const DiskParams& d, const OddProfile& h, double theta) {
  const FourierCoeffs k = fourier_coeffs_auto(h, d.a);
  if (d.kind == DiskCase::Interior) {
    const cplx omega = std::exp(I * theta);
    return from_gz(omega, d.a + std::conj(d.a) * omega,
                   d.kappa + std::conj(d.kappa) * omega + 2.0 * power_sum(k.c, omega));
  }
  if (d.kind == DiskCase::Exterior) {
    const cplx eta = std::exp(-I * theta);
    return from_gz_exterior(eta, d.a * eta + std::conj(d.a),
                            d.kappa * eta + std::conj(d.kappa) - 2.0 * conj_power_sum(k.c, eta));
  }
  throw DomainError("boundary_disk_point covers the case-1 disks only");
}

TwistorPoint phi_C(const OddProfile& h, const ChartPoint& p, const QuadratureConfig& cfg) {
  if (!p.fiber) throw DomainError("phi_C needs a fiber coordinate");
  const cplx w = *p.fiber;
  const bool lower = p.chart == Chart::DMinus;
  if (lower ? w.imag() > 0 : w.imag() < 0)
    throw DomainError("fiber coordinate in the wrong half-plane for chart " + chart_name(p.chart));
  if (p.chart == Chart::W && p.coords[1] != 0)
    return phi_C(h, transition(p, p.coords[1] > 0 ? Chart::DPlus : Chart::DMinus), cfg);
  return disk_point(DiskParams::from_point(p), h, w, cfg);
}

FoliationHit foliation_probe(const TwistorPoint& y, const OddProfile& h, const QuadratureConfig& cfg, double tol) {
  const auto& v = y.z;
  const double n01 = std::norm(v[0]) + std::norm(v[1]);
  if (n01 < tol * tol) throw DomainError("z1 = z2 = 0 lies over no point of the base");
  FoliationHit hit;
  const double cross = (v[0] * std::conj(v[1])).imag();
  if (std::abs(cross) > tol * n01) {
    // case 1: solve the Gz form for a, then kappa
    const cplx zeta = v[1] / v[0];
    if (zeta.imag() > 0) {
      const cplx den = v[1] + I * v[0];
      const cplx omega = (v[1] - I * v[0]) / den, g2 = v[2] / den, g3 = v[3] / den;
      const double q = 1 - std::norm(omega);
      hit.disk.kind = DiskCase::Interior;
      hit.disk.a = (g2 - omega * std::conj(g2)) / q;
      const FourierCoeffs k = fourier_coeffs_auto(h, hit.disk.a);
      const cplx r = g3 - 2.0 * power_sum(k.c, omega);
      hit.disk.kappa = (r - omega * std::conj(r)) / q;
    } else {
      const cplx den = v[1] - I * v[0];
      const cplx eta = (v[1] + I * v[0]) / den, g2 = v[2] / den, g3 = v[3] / den;
      const double q = 1 - std::norm(eta);
      hit.disk.kind = DiskCase::Exterior;
      hit.disk.a = (std::conj(g2) - std::conj(eta) * g2) / q;
      const FourierCoeffs k = fourier_coeffs_auto(h, hit.disk.a);
      const cplx r = g3 + 2.0 * conj_power_sum(k.c, eta);
      hit.disk.kappa = (std::conj(r) - std::conj(eta) * r) / q;
    }
    hit.param = zeta;
    return hit;
  }

  // (z1, z2) is a complex multiple of (-sin alpha, cos alpha)
  const std::size_t big = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
  const cplx phase = v[big] / std::abs(v[big]);
  const double r0 = (v[0] / phase).real(), r1 = (v[1] / phase).real();
  double alpha = std::atan2(-r0, r1);
  cplx lambda = phase * std::hypot(r0, r1);
  cplx xi = v[2] / lambda, w = v[3] / lambda;
  if (xi.imag() < -tol * (1 + std::abs(xi))) {
    alpha += M_PI;
    lambda = -lambda;
    xi = -xi;
    w = -w;
  }
  if (xi.imag() > tol * (1 + std::abs(xi))) {
    const cplx r = w - G_cauchy(h, xi, cfg);
    hit.disk.kind = DiskCase::Case2;
    hit.disk.alpha = wrap_angle(alpha);
    hit.disk.v1 = r.imag() / xi.imag();
    hit.disk.v0 = r.real() - hit.disk.v1 * xi.real();
    hit.param = xi;
    return hit;
  }
  // the base is a point of RP^2: infinity family
  const double z3 = xi.real();
  cplx u = w - h.h(z3);
  Vec3 z{-std::sin(alpha), std::cos(alpha), z3};
  if (std::abs(u.imag()) <= tol * (1 + std::abs(u))) throw BoundaryError("point lies on P");
  if (u.imag() < 0) {
    for (double& c : z) c = -c;
    u = -u;
  }
  hit.disk.kind = DiskCase::Infinity;
  hit.disk.z = z;
  hit.param = u;
  return hit;
}

json JumpSample::to_json() const {
  return {{"s", s}, {"A", A}, {"jump", jump}, {"jump_numeric", jump_numeric}, {"im_gap", im_gap}};
}

namespace {

// Neville extrapolation to t = 0.
cplx extrapolate_zero(const std::vector<double>& t, std::vector<cplx> v) {
  const std::size_t n = t.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) v[i] = (t[i + m] * v[i] - t[i] * v[i + 1]) / (t[i + m] - t[i]);
  return v[0];
}

}  // namespace

JumpSample varpi_jump(const OddProfile& h, double s, double A) {
  if (!(A > 0)) throw std::invalid_argument("varpi_jump needs A > 0");
  JumpSample out;
  out.s = s;
  out.A = A;
  out.theta = wrap_angle(std::arg((cplx(s, -1)) / cplx(s, 1)));
  const double sn = std::sin(0.5 * out.theta);
  if (std::abs(sn) < 1e-12) throw DomainError("sin(theta/2) vanishes");
  const FourierCoeffs k = fourier_coeffs_auto(h, cplx(0.5 * A, 0));
  cplx S{};
  for (int l = 0; l <= k.L; ++l) S += k.c[l] * std::exp(I * (out.theta * (l + 0.5)));
  out.jump = 4 * std::abs(S.real()) / std::abs(sn);
  out.im_expected = -h.s(A * std::cos(0.5 * out.theta)) / sn;

  // one-sided limits along zeta = s + i t at x = (0, -A)
  std::vector<double> ts;
  std::vector<cplx> up, down;
  for (int j = 0; j < 6; ++j) {
    const double t = 1e-2 * std::ldexp(1.0, -j);
    ts.push_back(t);
    up.push_back(F_series(k, omega_of_zeta(cplx(s, t))));
    down.push_back(F_exterior(k, omega_of_zeta(cplx(s, -t))));
  }
  const cplx hp = extrapolate_zero(ts, up), hm = extrapolate_zero(ts, down);
  out.jump_numeric = std::abs(hp.real() - hm.real());
  out.im_gap = std::abs(hp.imag() - hm.imag());
  return out;
}

std::vector<JumpSample> jump_scan(const OddProfile& h, const std::vector<double>& ss, const std::vector<double>& As,
                                  Exec ex) {
  std::vector<JumpSample> out(ss.size() * As.size());
  for_each_index(ex, out.size(), [&](std::size_t i) { out[i] = varpi_jump(h, ss[i % ss.size()], As[i / ss.size()]); });
  return out;
}

std::string disk_csv_header() {
  return "case,p1,p2,p3,p4,t_re,t_im,z1re,z1im,z2re,z2im,z3re,z3im,z4re,z4im";
}

std::string disk_csv_row(const DiskParams& d, cplx param, const TwistorPoint& y) {
  std::string row = disk_case_name(d.kind);
  char buf[40];
  auto add = [&](double x) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    row += buf;
  };
  for (double p : d.params()) add(p);
  add(param.real());
  add(param.imag());
  for (const cplx& c : y.z) {
    add(c.real());
    add(c.imag());
  }
  return row;
}

}  // namespace zoll
