#include "zoll/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "zoll/geodesics.hpp"
#include "zoll/petean.hpp"
#include "zoll/surfaces.hpp"
#include "zoll/transforms.hpp"
#include "zoll/twistor.hpp"

namespace zoll::cli {

namespace {

// shortest of %.15g .. %.17g that reads back exactly
std::string num(double v) {
  char buf[32];
  for (int p = 15; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

template <class... T>
std::string row(const T&... v) {
  std::string s;
  ((s += (s.empty() ? "" : ",") + num(v)), ...);
  return s;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

const std::set<std::string> odd_kinds{"odd_hermite", "tabulated_odd"};
const std::set<std::string> radial_kinds{"gaussian_mixture", "tabulated"};

Range parse_range(const std::string& name, const json& j) {
  Range r;
  try {
    r.min = j.at("min").get<double>();
    r.max = j.at("max").get<double>();
    r.count = j.at("count").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError("grid '" + name + "': " + e.what());
  }
  if (!std::isfinite(r.min) || !std::isfinite(r.max)) throw ConfigError("grid '" + name + "' has a non-finite end");
  if (r.count < 2) throw ConfigError("grid '" + name + "' needs count >= 2");
  if (!(r.max > r.min)) throw ConfigError("grid '" + name + "' needs max > min");
  return r;
}

QuadratureConfig parse_quadrature(const json& j) {
  QuadratureConfig q;
  static const std::set<std::string> keys{"panels", "truncation_multiplier", "symmetric_pv", "tolerance",
                                          "max_subdivisions"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError("unknown quadrature key '" + k + "'");
  try {
    q.panels = j.value("panels", q.panels);
    q.truncation_multiplier = j.value("truncation_multiplier", q.truncation_multiplier);
    q.symmetric_pv = j.value("symmetric_pv", q.symmetric_pv);
    q.tolerance = j.value("tolerance", q.tolerance);
    q.max_subdivisions = j.value("max_subdivisions", q.max_subdivisions);
    q.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("quadrature: ") + e.what());
  }
  return q;
}

// Check assembly with the tolerance overrides applied.
class Checks {
 public:
  Checks(const ExperimentConfig& cfg, const Options& opt, Report& rep) : cfg_(cfg), opt_(opt), rep_(rep) {}

  // value < bound; both the config and --tol may override the bound
  double upper(const std::string& name, double value, double bound) {
    return add(name, value, tolerance(name, bound), "<");
  }
  // fixed relation; only a per-check config entry overrides the bound
  double fixed(const std::string& name, double value, double bound, const std::string& rel) {
    if (auto it = cfg_.tolerances.find(name); it != cfg_.tolerances.end()) bound = it->second;
    return add(name, value, bound, rel);
  }
  // --tol wins over the config entry
  double tolerance(const std::string& name, double bound) const {
    if (opt_.tol) return *opt_.tol;
    auto it = cfg_.tolerances.find(name);
    return it != cfg_.tolerances.end() ? it->second : bound;
  }

 private:
  double add(const std::string& name, double value, double bound, const std::string& rel) {
    rep_.checks.push_back({name, value, bound, rel});
    return bound;
  }
  const ExperimentConfig& cfg_;
  const Options& opt_;
  Report& rep_;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

OddProfile odd_from(const ExperimentConfig& cfg) {
  return cfg.profile_is_odd() ? cfg.odd() : f_to_h(cfg.radial(), cfg.quadrature);
}

// ---------------------------------------------------------------------------

void radon_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const RadialProfile f = cfg.radial();
  const auto mus = cfg.grid("mu", {-4, 4, 33}).values();
  std::vector<double> fhat(mus.size()), rot(mus.size()), dev(mus.size());
  const double sigmas[] = {0.7, 2.1};
  for_each_index(Exec::Parallel, mus.size(), [&](std::size_t i) {
    fhat[i] = radon(f, mus[i], cfg.quadrature);
    double d = 0;
    for (double s : sigmas) {
      const double v = radon_along(f, s, mus[i], cfg.quadrature);
      d = std::max(d, std::abs(v - fhat[i]));
      if (s == sigmas[0]) rot[i] = v;
    }
    dev[i] = d;
  });
  const double scale = std::max(max_abs(fhat), 1e-300);
  ck.upper("direction_invariance", max_abs(dev) / scale, 1e-8);
  if (f.kind() == RadialProfile::Kind::GaussianMixture && !f.is_zero()) {
    std::vector<double> exact(mus.size());
    for (std::size_t i = 0; i < mus.size(); ++i) {
      for (const auto& t : f.terms()) exact[i] += t.c * std::sqrt(M_PI / t.k) * std::exp(-t.k * mus[i] * mus[i]);
    }
    ck.upper("closed_form", max_abs_diff(fhat, exact) / scale, 1e-8);
  }
  Table t{"radon", "mu,fhat,fhat_sigma07", {}};
  for (std::size_t i = 0; i < mus.size(); ++i) t.rows.push_back(row(mus[i], fhat[i], rot[i]));
  rep.tables.push_back(t);
  rep.data["max_abs_fhat"] = max_abs(fhat);
}

void hilbert_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  LineProfile phi;
  if (cfg.profile_is_odd()) {
    const OddProfile h = cfg.odd();
    phi = {[h](double mu) { return h.h(mu); }, std::max(6.0, h.cutoff())};
  } else {
    const RadialProfile f = cfg.radial();
    const RadialProfile fhat = radon_table(f, cfg.quadrature);
    phi = {[fhat](double mu) { return cplx(fhat.value(std::abs(mu)), 0); }, std::max(6.0, f.cutoff() + 1)};
  }
  const auto mus = cfg.grid("mu", {-4, 4, 64}).values();
  const auto once = hilbert_sweep(phi, mus, cfg.quadrature);
  const LineProfile tab = tabulate_line({[&](double mu) { return hilbert(phi, mu, cfg.quadrature); }, phi.extent},
                                        40.0, 1.0 / 64);
  const auto twice = hilbert_sweep(tab, mus, cfg.quadrature);
  double err = 0;
  Table t{"hilbert", "mu,phi_re,phi_im,hphi_re,hphi_im,hhphi_re,hhphi_im", {}};
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const cplx p = phi(mus[i]);
    err = std::max(err, std::abs(twice[i] - p));
    t.rows.push_back(row(mus[i], p.real(), p.imag(), once[i].real(), once[i].imag(), twice[i].real(),
                         twice[i].imag()));
  }
  ck.upper("involution", err, 1e-6);
  rep.tables.push_back(t);
}

void invert_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const RadialProfile f = cfg.radial();
  std::vector<std::array<double, 2>> grid;
  if (cfg.grids.count("x1") || cfg.grids.count("x2")) {
    for (double a : cfg.grid("x1", {0, 2, 3}).values())
      for (double b : cfg.grid("x2", {0, 2, 3}).values()) grid.push_back({a, b});
  } else {
    grid = unit_grid_3x3();
  }
  const InversionReport r = inversion_report(f, grid, cfg.quadrature);
  ck.upper("residual", r.residual, 1e-4);
  ck.upper("imaginary_residue", r.imaginary_residue, 1e-8);
  QuadratureConfig coarse = cfg.quadrature.fixed();
  const double r1 = inversion_residual(f, grid, coarse);
  const double r2 = inversion_residual(f, grid, coarse.with_panels(2 * coarse.panels));
  ck.fixed("halving_ratio", r1 > 0 ? r2 / r1 : 0.0, 0.5, "<=");
  rep.data["residual_coarse"] = r1;
  rep.data["residual_fine"] = r2;
  Table t{"invert", "x1,x2,reconstructed,exact", {}};
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.rows.push_back(row(grid[i][0], grid[i][1], r.reconstructed[i], r.exact[i]));
  rep.tables.push_back(t);
}

void curvature_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const std::string metric = cfg.param("metric", std::string("radial"));
  PeteanMetric m;
  bool harmonic = false;
  if (metric == "x1x2") {
    m.f = PlaneFunction::product_x1x2();
    harmonic = true;
  } else if (metric == "radial") {
    const int sign = cfg.param("sign", 1.0) < 0 ? -1 : 1;
    const RadialProfile f = cfg.radial();
    m = PeteanMetric::radial(f, sign, sign > 0 ? Chart::DPlus : Chart::DMinus);
    harmonic = f.is_zero();
  } else {
    throw ConfigError("curvature: metric must be 'radial' or 'x1x2'");
  }
  const double x3 = cfg.param("x3", 0.3), x4 = cfg.param("x4", -0.1), step = cfg.param("step", 1e-4);
  const auto x1s = cfg.grid("x1", {-2, 2, 5}).values(), x2s = cfg.grid("x2", {-2, 2, 5}).values();
  std::vector<CurvatureReport> reps(x1s.size() * x2s.size());
  for_each_index(Exec::Parallel, reps.size(), [&](std::size_t k) {
    reps[k] = curvature_report(m, {x1s[k / x2s.size()], x2s[k % x2s.size()], x3, x4}, step);
  });
  double riem = 0, asd = 0, gamma = 0;
  int mismatch = 0;
  Table t{"curvature", CurvatureReport::csv_header(), {}};
  for (const auto& r : reps) {
    riem = std::max(riem, r.riemann_max);
    asd = std::max(asd, r.asd_norm);
    gamma = std::max(gamma, r.gamma_dev);
    if ((r.riemann_max < 1e-6) != (r.harmonic_residual < 1e-6)) ++mismatch;
    t.rows.push_back(r.csv_row());
  }
  ck.upper("asd_norm", asd, 1e-6);
  if (harmonic)
    ck.upper("riemann_max", riem, 1e-6);
  else
    ck.fixed("riemann_max", riem, 1e-3, ">");
  ck.fixed("flat_iff_harmonic_mismatches", mismatch, 0, "==");
  rep.data["gamma_dev_max"] = gamma;
  rep.data["metric"] = metric;
  rep.tables.push_back(t);
}

void beta_cmd(const ExperimentConfig& cfg, const Options& opt, Checks& ck, Report& rep) {
  const RadialProfile f = cfg.radial();
  const int triples = static_cast<int>(cfg.param("triples", 20.0));
  const int points = static_cast<int>(cfg.param("points", 10.0));
  const double step = cfg.param("step", 1e-5);
  if (triples < 1 || points < 1) throw ConfigError("beta: triples and points must be positive");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> sg(0, M_PI), c(-2, 2), u(-4, 4);
  struct Sample {
    BetaParams b;
    ChartPoint p;
  };
  std::vector<Sample> samples;
  for (int j = 0; j < triples; ++j) {
    const BetaParams b{sg(rng), c(rng), c(rng)};
    const Chart ch = j % 2 ? Chart::DMinus : Chart::DPlus;
    for (int i = 0; i < points; ++i) {
      const double lam = u(rng), tau = u(rng);
      samples.push_back({b, surface_point(f, b, ch, lam, tau, cfg.quadrature)});
    }
  }
  std::vector<double> ann(samples.size()), on(samples.size());
  for_each_index(Exec::Parallel, samples.size(), [&](std::size_t i) {
    ann[i] = annihilation_residual(f, samples[i].b, samples[i].p, step, cfg.quadrature);
    const auto r = beta_residual_D(f, samples[i].b, samples[i].p, cfg.quadrature);
    on[i] = std::max(std::abs(r.first), std::abs(r.second));
  });
  ck.upper("annihilation", max_abs(ann), 1e-6);
  ck.upper("on_surface", max_abs(on), 1e-10);
  Table t{"beta", surface_csv_header(), {}};
  for (const auto& s : samples) t.rows.push_back(surface_csv_row(s.b, s.p));
  rep.tables.push_back(t);

  // one-sided limits at the equator against +-(1/4) fhat(c1)
  const auto c1s = cfg.grid("c1", {-1.5, 1.2, 10}).values();
  const double sigma = cfg.param("sigma", 0.4), beta = cfg.param("beta", 1e-3);
  Table ct{"beta_continuity", "c1,side,beta,psi,limit", {}};
  double worst = 0;
  for (double c1 : c1s)
    for (int side : {1, -1})
      for (double bt : {beta, -beta}) {
        const BetaParams b{sigma, c1, 0};
        const double a = std::asin(c1 * std::tan(bt));
        const double alpha = sigma + (side > 0 ? a : M_PI - a);
        const double psi = psi_band(f, alpha, bt, b, cfg.quadrature);
        const double limit = side * 0.25 * radon(f, c1, cfg.quadrature);
        worst = std::max(worst, std::abs(psi - limit));
        ct.rows.push_back(row(c1, side, bt, psi, limit));
      }
  ck.upper("equator_continuity", worst, 1e-6);
  rep.tables.push_back(ct);
}

void geodesic_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const RadialProfile f = cfg.radial();
  const double c1 = cfg.param("c1", 1.0);
  const int n = static_cast<int>(cfg.param("samples", 5.0));
  if (n < 2) throw ConfigError("geodesic: samples must be at least 2");
  const Nu0Solution sol = solve_nu0(f, c1);
  const GeodesicSpec spec = GeodesicSpec::matched(sol, cfg.param("c2", 0.2), cfg.param("q1", 0.3), cfg.param("q2", 0.1));
  const ClosureReport cr = closure_report(f, sol, spec, n, cfg.quadrature);
  ck.upper("closure_gap", cr.gap, 1e-6);
  const auto ss = cfg.grid("s", {-6, 6, 49}).values();
  double nul = 0;
  for (double s : ss)
    for (Chart ch : {Chart::DPlus, Chart::DMinus}) nul = std::max(nul, null_residual(f, sol, spec, ch, s));
  ck.upper("null_residual", nul, 1e-9);
  if (f.kind() == RadialProfile::Kind::GaussianMixture) {
    double a1 = 0;
    for (const auto& t : f.terms()) a1 -= 0.5 * t.c * c1 * std::sqrt(M_PI * t.k) * std::exp(-t.k * c1 * c1);
    ck.upper("A1_closed_form", std::abs(sol.A1 - a1), 1e-8);
  }
  const double delta = cfg.param("violation", 1e-2);
  if (delta != 0) {
    GeodesicSpec bad = spec;
    bad.q2m += delta;
    const double ratio = closure_gap(f, sol, bad, n, cfg.quadrature) / std::abs(delta);
    ck.fixed("violation_ratio_low", ratio, 0.5, ">=");
    ck.fixed("violation_ratio_high", ratio, 2.0, "<=");
  }
  rep.data["A1"] = sol.A1;
  rep.data["A2"] = sol.A2;
  rep.data["spec"] = {{"c1", spec.c1}, {"c2", spec.c2}, {"q1p", spec.q1p}, {"q2p", spec.q2p},
                      {"q1m", spec.q1m}, {"q2m", spec.q2m}};
  rep.data["junctions"] = {{{"value_gap", cr.first.value_gap}, {"slope_gap", cr.first.slope_gap}},
                           {{"value_gap", cr.second.value_gap}, {"slope_gap", cr.second.slope_gap}}};
  rep.tables.push_back({"geodesic", trace_csv_header(), split_lines(trace_csv(f, sol, spec, ss, cfg.quadrature))});
}

void zollfrei_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const RadialProfile f = cfg.radial();
  const auto c1s = cfg.grid("c1", {-2, 2, 10}).values(), q1s = cfg.grid("q1", {-1.5, 1.5, 10}).values();
  const double tol = ck.tolerance("closure", 1e-6);
  const ScanReport r = zollfrei_scan(f, c1s, q1s, tol, cfg.quadrature);
  ck.fixed("unclassified", r.failures, 0, "==");
  rep.data["closed"] = r.closed;
  rep.data["fiber"] = r.fiber;
  rep.data["closure_tolerance"] = tol;
  Table t{"zollfrei", "c1,q1,class,gap", {}};
  for (const auto& e : r.entries)
    t.rows.push_back(num(e.c1) + "," + (e.q1 ? num(*e.q1) : std::string()) + "," + class_name(e.cls) + "," +
                     num(e.gap));
  rep.tables.push_back(t);
}

void correspond_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const auto ts = cfg.grid("t", {0, 4, 33}).values();
  Table t{"correspond", "", {}};
  if (cfg.profile_is_odd()) {
    const OddProfile h = cfg.odd();
    const RadialProfile f = h_to_f(h, cfg.quadrature);
    const OddProfile back = f_to_h(f, cfg.quadrature);
    ck.upper("round_trip", odd_relative_error(back, h), 1e-4);
    t.header = "t,s,f,s_back";
    for (double x : ts) t.rows.push_back(row(x, h.s(x), f.value(std::abs(x)), back.s(x)));
  } else {
    const RadialProfile f = cfg.radial();
    const OddProfile h = f_to_h(f, cfg.quadrature);
    const RadialProfile back = h_to_f(h, cfg.quadrature);
    ck.upper("round_trip", radial_relative_error(back, f), 1e-4);
    t.header = "t,f,s,f_back";
    for (double x : ts) t.rows.push_back(row(x, f.value(std::abs(x)), h.s(x), back.value(std::abs(x))));
  }
  rep.tables.push_back(t);
}

// Random disk of the given case and a parameter inside it (im > 0) or on
// its boundary (im = 0).
std::pair<DiskParams, cplx> random_disk(int kind, std::mt19937_64& rng, bool boundary) {
  std::uniform_real_distribution<double> u(-2, 2), pos(0.1, 2), ang(0, 2 * M_PI);
  DiskParams d;
  cplx t;
  const double im = boundary ? 0.0 : pos(rng);
  switch (kind) {
    case 0:
      d = DiskParams::from_point({Chart::DPlus, {u(rng), u(rng), u(rng), u(rng)}, {}});
      t = cplx(u(rng), im);
      break;
    case 1:
      d = DiskParams::from_point({Chart::DMinus, {u(rng), u(rng), u(rng), u(rng)}, {}});
      t = cplx(u(rng), -im);
      break;
    case 2:
      d = DiskParams::from_point({Chart::W, {ang(rng), 0, u(rng), u(rng)}, {}});
      t = cplx(u(rng), im);
      break;
    default: {
      d.kind = DiskCase::Infinity;
      const double a = ang(rng);
      d.z = {std::cos(a), std::sin(a), u(rng)};
      t = cplx(u(rng), im);
    }
  }
  return {d, t};
}

void disks_cmd(const ExperimentConfig& cfg, const Options& opt, Checks& ck, Report& rep) {
  const OddProfile h = odd_from(cfg);
  const int n = static_cast<int>(cfg.param("samples", 100.0));
  if (n < 1) throw ConfigError("disks: samples must be positive");
  std::mt19937_64 rng(opt.seed);
  Table bt{"disks_boundary", disk_csv_header(), {}}, it{"disks_interior", disk_csv_header(), {}};
  double worst = 0, nearest = 1e300;
  for (int i = 0; i < n; ++i) {
    const auto [d, t] = random_disk(i % 4, rng, true);
    const TwistorPoint y = disk_point(d, h, t, cfg.quadrature);
    worst = std::max(worst, p_membership_residual(y, h));
    bt.rows.push_back(disk_csv_row(d, t, y));
    const auto [di, ti] = random_disk(i % 4, rng, false);
    const TwistorPoint yi = disk_point(di, h, ti, cfg.quadrature);
    nearest = std::min(nearest, p_membership_residual(yi, h));
    it.rows.push_back(disk_csv_row(di, ti, yi));
  }
  ck.upper("boundary_on_P", worst, 1e-6);
  rep.data["interior_min_distance_to_P"] = nearest;
  rep.data["samples"] = n;
  rep.tables.push_back(bt);
  rep.tables.push_back(it);
}

void foliate_cmd(const ExperimentConfig& cfg, const Options& opt, Checks& ck, Report& rep) {
  const OddProfile h = odd_from(cfg);
  const int n = static_cast<int>(cfg.param("samples", 40.0));
  if (n < 1) throw ConfigError("foliate: samples must be positive");
  std::mt19937_64 rng(opt.seed);
  double worst_param = 0, worst_point = 0;
  int wrong = 0;
  Table t{"foliate", "case,found,param_err,point_err", {}};
  for (int i = 0; i < n; ++i) {
    const auto [d, param] = random_disk(i % 4, rng, false);
    const TwistorPoint y = disk_point(d, h, param, cfg.quadrature);
    const FoliationHit hit = foliation_probe(y, h, cfg.quadrature);
    if (hit.disk.kind != d.kind) ++wrong;
    const auto pa = hit.disk.params(), pb = d.params();
    double ep = std::abs(hit.param - param);
    for (int k = 0; k < 4; ++k) ep = std::max(ep, std::abs(pa[k] - pb[k]));
    const double ey = disk_point(hit.disk, h, hit.param, cfg.quadrature).distance(y);
    worst_param = std::max(worst_param, ep);
    worst_point = std::max(worst_point, ey);
    t.rows.push_back(disk_case_name(d.kind) + "," + disk_case_name(hit.disk.kind) + "," + num(ep) + "," + num(ey));
  }
  ck.fixed("case_mismatches", wrong, 0, "==");
  ck.upper("param_error", worst_param, 1e-8);
  ck.upper("point_error", worst_point, 1e-8);
  rep.tables.push_back(t);
}

void jump_cmd(const ExperimentConfig& cfg, Checks& ck, Report& rep) {
  const OddProfile h = odd_from(cfg);
  const auto ss = cfg.grid("s", {-4, 4, 33}).values(), As = cfg.grid("A", {0.5, 2, 4}).values();
  for (double A : As)
    if (A == 0) throw ConfigError("jump: A = 0 is not on the curve family");
  const auto scan = jump_scan(h, ss, As);
  double best = 0, best_num = 0, im = 0, agree = 0;
  json samples = json::array();
  Table t{"jump", "s,A,theta,jump,jump_numeric,im_gap", {}};
  for (const auto& j : scan) {
    best = std::max(best, j.jump);
    best_num = std::max(best_num, j.jump_numeric);
    im = std::max(im, j.im_gap);
    agree = std::max(agree, std::abs(j.jump - j.jump_numeric));
    samples.push_back(j.to_json());
    t.rows.push_back(row(j.s, j.A, j.theta, j.jump, j.jump_numeric, j.im_gap));
  }
  if (h.is_zero()) {
    ck.fixed("max_jump", best, 0, "==");
    ck.fixed("max_jump_numeric", best_num, 0, "==");
  } else {
    ck.fixed("relative_max_jump", best / h.max_abs(), 1e-3, ">");
  }
  ck.upper("im_gap", im, 1e-6);
  ck.upper("jump_agreement", agree, 1e-6);
  rep.data["samples"] = samples;
  rep.tables.push_back(t);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> Range::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = i + 1 == count ? max : min + (max - min) * i / (count - 1);
  return v;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> keys{"description", "profile", "quadrature", "grids",
                                          "params",      "tolerances", "output", "format"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError("unknown config key '" + k + "'");
  ExperimentConfig c;
  try {
    if (j.contains("profile")) c.profile = j.at("profile");
    if (j.contains("quadrature")) c.quadrature = parse_quadrature(j.at("quadrature"));
    if (j.contains("grids"))
      for (const auto& [k, v] : j.at("grids").items()) c.grids[k] = parse_range(k, v);
    if (j.contains("params")) {
      c.params = j.at("params");
      if (!c.params.is_object()) throw ConfigError("params must be an object");
    }
    if (j.contains("tolerances"))
      for (const auto& [k, v] : j.at("tolerances").items()) {
        const double b = v.get<double>();
        if (!std::isfinite(b)) throw ConfigError("tolerance '" + k + "' is not finite");
        c.tolerances[k] = b;
      }
    c.output = j.value("output", c.output);
    const std::string fmt = j.value("format", std::string("csv"));
    if (fmt == "json")
      c.format = Format::Json;
    else if (fmt == "csv")
      c.format = Format::Csv;
    else
      throw ConfigError("format must be 'json' or 'csv'");
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  if (!c.profile.is_object() || !c.profile.contains("kind")) throw ConfigError("profile needs a 'kind'");
  // parse once so that profile errors surface as config errors
  if (c.profile_is_odd())
    c.odd();
  else
    c.radial();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json g = json::object();
  for (const auto& [k, r] : grids) g[k] = {{"min", r.min}, {"max", r.max}, {"count", r.count}};
  json q{{"panels", quadrature.panels},
         {"truncation_multiplier", quadrature.truncation_multiplier},
         {"symmetric_pv", quadrature.symmetric_pv},
         {"tolerance", quadrature.tolerance},
         {"max_subdivisions", quadrature.max_subdivisions}};
  json t = json::object();
  for (const auto& [k, v] : tolerances) t[k] = v;
  return {{"profile", profile}, {"quadrature", q}, {"grids", g}, {"params", params}, {"tolerances", t},
          {"output", output}, {"format", format == Format::Json ? "json" : "csv"}};
}

Range ExperimentConfig::grid(const std::string& name, Range fallback) const {
  auto it = grids.find(name);
  return it == grids.end() ? fallback : it->second;
}

double ExperimentConfig::param(const std::string& name, double fallback) const {
  if (!params.contains(name)) return fallback;
  const json& v = params.at(name);
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw ConfigError("param '" + name + "' must be a number");
  return v.get<double>();
}

std::string ExperimentConfig::param(const std::string& name, const std::string& fallback) const {
  if (!params.contains(name)) return fallback;
  const json& v = params.at(name);
  if (!v.is_string()) throw ConfigError("param '" + name + "' must be a string");
  return v.get<std::string>();
}

bool ExperimentConfig::profile_is_odd() const {
  return odd_kinds.count(profile.value("kind", std::string()));
}

RadialProfile ExperimentConfig::radial() const {
  const std::string kind = profile.value("kind", std::string());
  if (odd_kinds.count(kind)) throw ConfigError("this subcommand needs a radial profile, got '" + kind + "'");
  try {
    return RadialProfile::from_json(profile);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

OddProfile ExperimentConfig::odd() const {
  const std::string kind = profile.value("kind", std::string());
  if (radial_kinds.count(kind)) throw ConfigError("expected an odd profile, got '" + kind + "'");
  try {
    return OddProfile::from_json(profile);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

bool Check::pass() const {
  if (std::isnan(value)) return false;
  if (relation == "<") return value < bound;
  if (relation == "<=") return value <= bound;
  if (relation == ">") return value > bound;
  if (relation == ">=") return value >= bound;
  if (relation == "==") return value == bound;
  return false;
}

std::string Check::line() const {
  return std::string(pass() ? "PASS " : "FAIL ") + name + " " + num(value) + " " + relation + " " + num(bound);
}

json Table::to_json() const {
  auto cells = [](const std::string& line) {
    json r = json::array();
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (!c.empty() && end == c.c_str() + c.size())
        r.push_back(v);
      else if (c.empty())
        r.push_back(nullptr);
      else
        r.push_back(c);
    }
    return r;
  };
  json rs = json::array();
  for (const auto& l : rows) rs.push_back(cells(l));
  return {{"columns", cells(header)}, {"rows", rs}};
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return true;
}

std::string Report::summary() const {
  std::string s = subcommand + ": " + (passed() ? "pass" : "FAIL") + "\n";
  for (const auto& c : checks) s += "  " + c.line() + "\n";
  return s;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"radon",    "hilbert",    "invert", "curvature", "beta", "geodesic",
                                              "zollfrei", "correspond", "disks",  "foliate",   "jump"};
  return names;
}

Report run_subcommand(const std::string& name, const ExperimentConfig& cfg, const Options& opt) {
  Report rep;
  rep.subcommand = name;
  Checks ck(cfg, opt, rep);
  if (name == "radon")
    radon_cmd(cfg, ck, rep);
  else if (name == "hilbert")
    hilbert_cmd(cfg, ck, rep);
  else if (name == "invert")
    invert_cmd(cfg, ck, rep);
  else if (name == "curvature")
    curvature_cmd(cfg, ck, rep);
  else if (name == "beta")
    beta_cmd(cfg, opt, ck, rep);
  else if (name == "geodesic")
    geodesic_cmd(cfg, ck, rep);
  else if (name == "zollfrei")
    zollfrei_cmd(cfg, ck, rep);
  else if (name == "correspond")
    correspond_cmd(cfg, ck, rep);
  else if (name == "disks")
    disks_cmd(cfg, opt, ck, rep);
  else if (name == "foliate")
    foliate_cmd(cfg, opt, ck, rep);
  else if (name == "jump")
    jump_cmd(cfg, ck, rep);
  else
    throw ConfigError("unknown subcommand '" + name + "'");
  return rep;
}

void write_report(const Report& r, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"relation", c.relation},
                      {"pass", c.pass()}});
  // the output directory stays out of the report so that reruns elsewhere match byte for byte
  json echo = cfg.to_json();
  echo.erase("output");
  json j{{"subcommand", r.subcommand}, {"config", echo}, {"checks", checks},
         {"passed", r.passed()},       {"data", r.data}};
  if (cfg.format == Format::Json) {
    json tables = json::object();
    for (const auto& t : r.tables) tables[t.name] = t.to_json();
    j["tables"] = tables;
  } else {
    json files = json::array();
    for (const auto& t : r.tables) {
      const std::string file = t.name + ".csv";
      std::ofstream out(dir / file);
      out << t.header << "\n";
      for (const auto& l : t.rows) out << l << "\n";
      files.push_back(file);
    }
    j["csv"] = files;
  }
  std::ofstream(dir / (r.subcommand + ".json")) << j.dump(2) << "\n";
  std::ofstream(dir / (r.subcommand + ".txt")) << r.summary();
}

int run(int argc, char** argv) {
  CLI::App app{"Zollfrei metric and twistor correspondence experiments"};
  app.require_subcommand(1);
  std::string config, out;
  std::optional<double> tol;
  unsigned seed = 1;
  int threads = 0;
  for (const auto& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--tol", tol, "replaces every upper tolerance bound");
    sub->add_option("--seed", seed, "seed for random sample points");
    sub->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::load(config);
    if (!out.empty()) cfg.output = out;
    if (tol && !(*tol > 0)) throw ConfigError("--tol must be positive");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (threads > 0) set_threads(threads);

  try {
    const Report r = run_subcommand(name, cfg, Options{tol, seed});
    write_report(r, cfg);
    std::cout << r.summary();
    return r.passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace zoll::cli
