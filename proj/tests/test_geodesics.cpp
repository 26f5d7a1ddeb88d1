#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zoll/geodesics.hpp"

using namespace zoll;

namespace {

QuadratureConfig cfg;

RadialProfile gauss() { return RadialProfile::gaussian_mixture({{1.0, 1.0}}); }
RadialProfile two_gauss() { return RadialProfile::gaussian_mixture({{1.0, 1.0}, {-0.5, 2.0}}); }

// (1/2) int_0^inf d2 f(t, c1) dt for a Gaussian mixture, by GSL.
double a1_oracle(const RadialProfile& f, double c1) {
  return 0.5 * oracle::integrate_upper([&](double t) { return f.jet(t, c1).d2; }, 0);
}

}  // namespace

TEST_CASE("nu0 examples") {
  const Nu0Solution z = solve_nu0(RadialProfile(), 1.0);
  CHECK(z.A1 == 0.0);
  CHECK(z.A2 == 0.0);
  CHECK(z.value(3.0) == 0.0);

  const Nu0Solution axis = solve_nu0(gauss(), 0.0);
  CHECK(std::abs(axis.A1) < 1e-15);
  CHECK(std::abs(axis.value(2.0)) < 1e-15);

  const Nu0Solution g = solve_nu0(gauss(), 1.0);
  CHECK(g.A1 == doctest::Approx(-std::exp(-1.0) * std::sqrt(M_PI) / 2).epsilon(1e-9));
  CHECK(g.A1 == doctest::Approx(-0.326025).epsilon(1e-6));
  CHECK(g.A1 == doctest::Approx(a1_oracle(gauss(), 1.0)).epsilon(1e-9));
  CHECK(g.step <= 1e-3 * g.S);
  CHECK(std::abs(g.value(0)) < 1e-15);
  CHECK(std::abs(g.slope(0)) < 1e-14);
  CHECK(g.evenness() == 0.0);
  CHECK(g.fit_residual < g.tol);
  MESSAGE("A2 at c1 = 1: " << g.A2);

  CHECK_THROWS_AS(solve_nu0(gauss(), 1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_nu0(gauss(), 1.0, 0, 1e-30), AsymptoticError);
}

TEST_CASE("nu0 against its equation and the A1 oracle") {
  for (const auto& f : {gauss(), two_gauss()}) {
    for (double c1 : {-1.3, -0.4, 0.7, 1.9}) {
      const Nu0Solution sol = solve_nu0(f, c1);
      CHECK(sol.A1 == doctest::Approx(a1_oracle(f, c1)).epsilon(1e-9).scale(1e-12));
      CHECK(sol.evenness() < 10 * sol.tol);
      // fourth-order central difference of the slope at grid nodes
      const double h = sol.step;
      for (double s : {-3.0, -0.5, 0.25, 1.5}) {
        const double d = (8 * (sol.slope(s + h) - sol.slope(s - h)) - (sol.slope(s + 2 * h) - sol.slope(s - 2 * h))) /
                         (12 * h);
        CHECK(std::abs(d - 0.5 * f.jet(s, c1).d2) < 1e-8);
      }
      // interpolation agrees with the asymptotic line at the seam
      CHECK(std::abs(sol.value(sol.S * (1 - 1e-12)) - (sol.A1 * sol.S + sol.A2)) < 1e-10);
    }
  }
}

TEST_CASE("geodesic points, null velocity and the geodesic equation") {
  const GeodesicSpec zero{0.5, 0, 0, 0, 0, 0};
  const Nu0Solution z = solve_nu0(RadialProfile(), 0.5);
  const ChartPoint p = geodesic_point(RadialProfile(), z, zero, Chart::DPlus, 2.0, cfg);
  CHECK(p.coords == Vec4{2, 0.5, 0, 0});

  const Nu0Solution sol = solve_nu0(gauss(), 1.0);
  const GeodesicSpec spec = GeodesicSpec::matched(sol, 0.3, 0.4, -0.2);
  for (Chart ch : {Chart::DPlus, Chart::DMinus})
    for (double s = -6; s <= 6; s += 0.37) {
      CHECK(null_residual(gauss(), sol, spec, ch, s) < 1e-9);
      CHECK(geodesic_equation_residual(gauss(), sol, spec, ch, s) < 10 * sol.tol);
      // the curve stays on the surface sigma = 0, c1, c2
      const auto r = beta_residual_D(gauss(), {0, spec.c1, spec.c2}, geodesic_point(gauss(), sol, spec, ch, s, cfg), cfg);
      CHECK(std::abs(r.first) < 1e-12);
      CHECK(std::abs(r.second) < 1e-12);
    }
  // the velocity matches the derivative of the curve
  const double s = 0.8, h = 1e-5;
  const Vec4 a = geodesic_point(gauss(), sol, spec, Chart::DPlus, s + h, cfg).coords;
  const Vec4 b = geodesic_point(gauss(), sol, spec, Chart::DPlus, s - h, cfg).coords;
  const Eigen::Vector4d v = geodesic_velocity(gauss(), sol, spec, Chart::DPlus, s);
  for (int i = 0; i < 4; ++i) CHECK(std::abs((a[i] - b[i]) / (2 * h) - v[i]) < 1e-7);
  // the solution must belong to the same c1
  GeodesicSpec other = spec;
  other.c1 = 0.0;
  CHECK_THROWS_AS(geodesic_point(gauss(), sol, other, Chart::DPlus, 1, cfg), std::logic_error);
  CHECK_THROWS_AS(geodesic_point(gauss(), Nu0Solution{}, spec, Chart::DPlus, 1, cfg), std::logic_error);
}

TEST_CASE("rotated geodesics lie on rotated surfaces") {
  const Nu0Solution sol = solve_nu0(gauss(), 0.6);
  const GeodesicSpec spec = GeodesicSpec::matched(sol, -0.4, 0.2, 0.1);
  for (double angle : {0.3, 1.7, 2.9}) {
    for (double s : {-2.0, 0.5, 3.0}) {
      const ChartPoint p = rotate_point(geodesic_point(gauss(), sol, spec, Chart::DPlus, s, cfg), angle);
      const auto r = beta_residual_D(gauss(), BetaParams{angle, spec.c1, spec.c2}.canonical(), p, cfg);
      CHECK(std::abs(r.first) < 1e-12);
      CHECK(std::abs(r.second) < 1e-10);
    }
  }
  CHECK_THROWS_AS(rotate_point(ChartPoint{Chart::W, {0, 0, 0, 0}, {}}, 1.0), DomainError);
}

TEST_CASE("closure across the equator") {
  const GeodesicSpec flat{0.7, 0.2, 0.3, 0.1, 0.3, 0.1};
  const Nu0Solution z = solve_nu0(RadialProfile(), 0.7);
  CHECK(closure_gap(RadialProfile(), z, flat, 5, cfg) < 1e-10);

  const Nu0Solution sol = solve_nu0(gauss(), 1.0);
  const GeodesicSpec good = GeodesicSpec::matched(sol, 0.2, 0.3, 0.1);
  CHECK(good.is_matched(sol));
  const ClosureReport r = closure_report(gauss(), sol, good, 5, cfg);
  MESSAGE("matched gap " << r.gap << " value " << r.first.value_gap << " slope " << r.first.slope_gap);
  CHECK(r.gap < 1e-6);
  for (const auto* j : {&r.first, &r.second}) {
    MESSAGE("refinement " << j->refinement[0] << " " << j->refinement[1] << " " << j->refinement[2] << " "
                          << j->refinement[3]);
    for (std::size_t k = 1; k < j->refinement.size(); ++k) CHECK(j->refinement[k] <= j->refinement[k - 1]);
  }

  for (double delta : {1e-2, 1e-3}) {
    GeodesicSpec bad = good;
    bad.q2m += delta;
    const double gap = closure_gap(gauss(), sol, bad, 5, cfg);
    MESSAGE("delta " << delta << " gap " << gap);
    CHECK(gap == doctest::Approx(delta).epsilon(0.2));
    CHECK(gap > delta / 2);
  }
  GeodesicSpec tilt = good;
  tilt.q1m += 1e-3;
  CHECK(closure_gap(gauss(), sol, tilt, 5, cfg) > 5e-4);

  // the q2- = q1+ + 2 A1 form does not close
  GeodesicSpec alt = good;
  alt.q2m = good.q1p + 2 * sol.A1;
  CHECK(alt.is_matched_q1_form(sol));
  CHECK_FALSE(alt.is_matched(sol));
  CHECK(closure_gap(gauss(), sol, alt, 5, cfg) > 0.1);
}

TEST_CASE("fiber lines end at the antipodal surface endpoints") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2), s(0, M_PI);
  for (int i = 0; i < 10; ++i) {
    const double a = u(rng), b = u(rng), sigma = s(rng);
    const auto ends = fiber_line_ends(a, b, sigma);
    const double c1 = -std::sin(sigma) * a + std::cos(sigma) * b;
    const auto expect = surface_endpoints({sigma, c1, 0});
    CHECK(plane_distance(ends.first, expect.first) < 1e-8);
    CHECK(plane_distance(ends.second, expect.second) < 1e-8);
    CHECK(plane_distance(ends.second, antipodal(ends.first)) < 1e-8);
    CHECK(ends.first.at_infinity(1e-9));
  }
  CHECK(plane_distance(surface_endpoints({0, 0, 0}).first, surface_endpoints({0, 0, 0}).second) == 2.0);
}

TEST_CASE("zollfrei scan") {
  std::vector<double> c1s, q1s;
  for (int i = 0; i < 10; ++i) {
    c1s.push_back(-2.0 + 4.0 * i / 9);
    q1s.push_back(-1.5 + 3.0 * i / 9);
  }
  const ScanReport flat = zollfrei_scan(RadialProfile(), {0.0, 1.0}, {0.5}, 1e-6, cfg);
  CHECK(flat.failures == 0);

  const ScanReport rep = zollfrei_scan(gauss(), c1s, q1s, 1e-6, cfg);
  CHECK(rep.closed == 100);
  CHECK(rep.fiber == 10);
  CHECK(rep.failures == 0);
  for (const auto& e : rep.entries)
    if (e.cls == GeodesicClass::Closed) CHECK(std::abs(e.q2m_fit - e.q2m_expected) < 1e-6);
  const json j = rep.to_json();
  CHECK(j["entries"].size() == 110);
  CHECK(j["entries"][0].contains("gap"));
  CHECK(j["entries"][105]["q1"].is_null());

  const ScanReport serial = zollfrei_scan(gauss(), {0.5}, {0.1, 0.2}, 1e-6, cfg, Exec::Serial);
  const ScanReport par = zollfrei_scan(gauss(), {0.5}, {0.1, 0.2}, 1e-6, cfg, Exec::Parallel);
  CHECK(serial.to_json() == par.to_json());
}

TEST_CASE("trace rows") {
  const Nu0Solution z = solve_nu0(RadialProfile(), 0.5);
  const std::string csv = trace_csv(RadialProfile(), z, {0.5, 0, 0, 0, 0, 0}, {1.0}, cfg);
  CHECK(trace_csv_header() == "branch,s,x1,x2,x3,x4");
  CHECK(csv == "Dplus,1,1,0.5,0,0\nDminus,1,1,0.5,0,0\n");
}
