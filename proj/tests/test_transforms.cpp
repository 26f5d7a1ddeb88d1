#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "zoll/transforms.hpp"

using namespace zoll;

namespace {

const double kSqrtPi = std::sqrt(M_PI);

RadialProfile gauss() { return RadialProfile::gaussian_mixture({{1.0, 1.0}}); }
RadialProfile two_gauss() { return RadialProfile::gaussian_mixture({{1.0, 1.0}, {-0.5, 2.0}}); }
RadialProfile wide_narrow() { return RadialProfile::gaussian_mixture({{0.7, 0.5}, {0.3, 3.0}}); }

double radon_oracle(const RadialProfile& f, double mu) {
  return oracle::integrate_line([&](double t) { return f.value(std::hypot(t, mu)); });
}

}  // namespace

TEST_CASE("radon of zero and of Gaussians") {
  QuadratureConfig cfg;
  CHECK(radon(RadialProfile(), 1.0, cfg) == 0.0);
  CHECK(radon(gauss(), 0.0, cfg) == doctest::Approx(kSqrtPi).epsilon(1e-12));
  CHECK(radon(gauss(), 1.0, cfg) == doctest::Approx(kSqrtPi * std::exp(-1.0)).epsilon(1e-12));
  for (const auto& f : {two_gauss(), wide_narrow()})
    for (double mu : {0.0, 0.3, 1.7, 4.0})
      CHECK(std::abs(radon(f, mu, cfg) - radon_oracle(f, mu)) < 1e-10);
}

TEST_CASE("radon is even in mu and independent of the direction") {
  QuadratureConfig cfg;
  for (const auto& f : {gauss(), two_gauss(), wide_narrow()}) {
    for (int j = 0; j < 16; ++j) {
      const double mu = -3.0 + 6.0 * j / 15;
      const double ref = radon(f, mu, cfg);
      CHECK(std::abs(radon(f, -mu, cfg) - ref) <= 1e-15 * std::abs(ref) + 1e-300);
      for (int k = 0; k < 8; ++k) {
        const double sigma = M_PI * k / 4 + 0.1;
        CHECK(std::abs(radon_along(f, sigma, mu, cfg) - ref) < 1e-10);
      }
    }
  }
}

TEST_CASE("half radon transform") {
  QuadratureConfig cfg;
  CHECK(half_radon(RadialProfile(), 0.3, 0.2, +1, cfg) == 0.0);
  CHECK(half_radon(gauss(), 0.0, 0.0, +1, cfg) == doctest::Approx(kSqrtPi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(half_radon(gauss(), 0.0, 0.0, 0, cfg), std::invalid_argument);
  for (const auto& f : {gauss(), two_gauss(), wide_narrow()}) {
    for (double sigma : {0.0, 0.7, 2.1, 4.4}) {
      for (double mu : {-1.5, 0.0, 0.4, 2.5}) {
        const double full = radon(f, mu, cfg);
        const double plus = half_radon(f, sigma, mu, +1, cfg);
        const double minus = half_radon(f, sigma, mu, -1, cfg);
        CHECK(std::abs(plus - 0.5 * full) < 1e-10);
        CHECK(std::abs(minus + 0.5 * full) < 1e-10);
        // Orientation reversal: the -inf branch carries a sign, so the
        // branches differ (not add) to the full line integral.
        CHECK(std::abs(plus - minus - full) < 1e-10);
        CHECK(std::abs(plus + minus) < 1e-10);
      }
    }
  }
}

TEST_CASE("dual transform") {
  QuadratureConfig cfg;
  const auto constant = LineFunction::of_mu([](double) { return cplx(2.5, -1.0); }, true);
  CHECK(std::abs(dual_radon(constant, 0.3, -4.0, cfg) - cplx(2.5, -1.0)) < 1e-14);
  const auto bump = LineFunction::of_mu([](double mu) { return cplx(std::exp(-mu * mu), 0); }, true);
  CHECK(std::abs(dual_radon(bump, 0, 0, cfg) - 1.0) < 1e-14);
  // (1/2pi) int exp(-sin^2) = exp(-1/2) I0(1/2)
  const double ref = std::exp(-0.5) * oracle::bessel_i0(0.5);
  const double brute =
      oracle::integrate([](double s) { return std::exp(-std::sin(s) * std::sin(s)); }, 0, 2 * M_PI) /
      (2 * M_PI);
  CHECK(std::abs(ref - brute) < 1e-12);
  CHECK(std::abs(dual_radon(bump, 1, 0, cfg) - ref) < 1e-12);
}

TEST_CASE("line function sigma-independence flag is checked") {
  LineFunction bad;
  bad.fn = [](double sigma, double mu) { return cplx(std::cos(sigma) * mu, 0); };
  bad.sigma_independent = true;
  CHECK_THROWS_AS(bad.check_sigma_independence(), std::invalid_argument);
  bad.sigma_independent = false;
  CHECK_NOTHROW(bad.check_sigma_independence());
}

TEST_CASE("hilbert transform against the Cauchy principal value oracle") {
  QuadratureConfig cfg;
  const LineProfile bump{[](double v) { return cplx(std::exp(-v * v), 0); }, 6};
  const LineProfile zero{[](double) { return cplx{}; }, 6};
  CHECK(std::abs(hilbert(bump, 0.0, cfg)) < 1e-15);
  CHECK(std::abs(hilbert(zero, 1.3, cfg)) == 0.0);
  for (double mu : {1.0, -0.4, 2.2, 7.5}) {
    const cplx got = hilbert(bump, mu, cfg);
    const double pv = oracle::cauchy_pv([](double v) { return std::exp(-v * v); }, mu);
    CHECK(std::abs(pv + 2 * kSqrtPi * oracle::dawson(mu)) < 1e-10);
    CHECK(std::abs(got.real()) < 1e-15);
    CHECK(std::abs(got.imag() - pv / M_PI) < 1e-10);
  }
  QuadratureConfig sub = cfg;
  sub.symmetric_pv = false;
  CHECK(std::abs(hilbert(bump, 1.0, sub) - hilbert(bump, 1.0, cfg)) < 1e-9);
}

TEST_CASE("hilbert transform is an involution") {
  QuadratureConfig cfg;
  const std::vector<LineProfile> fns = {
      {[](double v) { return cplx(std::exp(-v * v), 0); }, 6},
      {[](double v) { return cplx(v * std::exp(-v * v), 0); }, 6},
      {[](double v) { return cplx((1 + 0.5 * v) * std::exp(-2 * v * v), 0.3 * std::exp(-v * v)); }, 6}};
  for (const auto& phi : fns) {
    const LineProfile once =
        tabulate_line({[&](double mu) { return hilbert(phi, mu, cfg); }, phi.extent}, 40.0, 1.0 / 64);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      const double mu = -4.0 + 8.0 * i / 63;
      worst = std::max(worst, std::abs(hilbert(once, mu, cfg) - phi(mu)));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("hilbert transform exchanges parity and maps real to imaginary") {
  QuadratureConfig cfg;
  const LineProfile even{[](double v) { return cplx(std::exp(-v * v) * (1 + v * v), 0); }, 6};
  const LineProfile odd{[](double v) { return cplx(v * std::exp(-v * v), 0); }, 6};
  for (int i = 0; i < 16; ++i) {
    const double mu = 0.25 * (i + 1);
    const cplx e1 = hilbert(even, mu, cfg), e2 = hilbert(even, -mu, cfg);
    const cplx o1 = hilbert(odd, mu, cfg), o2 = hilbert(odd, -mu, cfg);
    CHECK(std::abs(e1.real()) < 1e-15);
    CHECK(std::abs(o1.real()) < 1e-15);
    CHECK(std::abs(e1 + e2) < 1e-12);  // odd output
    CHECK(std::abs(o1 - o2) < 1e-12);  // even output
  }
}

TEST_CASE("quadrature configuration and error reporting") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK_THROWS_AS(cfg.with_panels(15).validate(), std::invalid_argument);
  CHECK_THROWS_AS(cfg.with_panels(8).validate(), std::invalid_argument);
  QuadratureConfig tight = cfg;
  tight.max_subdivisions = 3;
  tight.tolerance = 1e-15;
  try {
    integrate([](double x) { return 1 / std::sqrt(std::abs(x - 0.3137)); }, 0.0, 1.0, tight);
    FAIL("expected a quadrature error");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.previous()));
    CHECK(std::isfinite(e.last()));
    CHECK(e.previous() != e.last());
  }
}

TEST_CASE("inversion formula reconstructs Gaussian mixtures") {
  QuadratureConfig cfg;
  const auto grid = unit_grid_3x3();
  CHECK(inversion_residual(RadialProfile(), grid, cfg) == 0.0);
  for (const auto& f : {gauss(), two_gauss(), wide_narrow()}) {
    const auto rep = inversion_report(f, grid, cfg);
    CHECK(rep.residual < 1e-4);
    CHECK(rep.imaginary_residue < 1e-8);
  }
}

TEST_CASE("inversion residual drops under quadrature step halving") {
  QuadratureConfig coarse;
  coarse.panels = 32;
  coarse.max_subdivisions = 0;
  const auto grid = unit_grid_3x3();
  for (const auto& f : {gauss(), two_gauss(), wide_narrow()}) {
    const double r1 = inversion_residual(f, grid, coarse);
    const double r2 = inversion_residual(f, grid, coarse.with_panels(64));
    INFO("coarse " << r1 << " fine " << r2);
    CHECK(r1 < 1e-4);
    CHECK(r2 <= 0.5 * r1);
  }
}

TEST_CASE("serial and parallel radon tables agree bit for bit") {
  QuadratureConfig cfg;
  const auto a = radon_table(two_gauss(), cfg, 1.0 / 16, Exec::Serial);
  const auto b = radon_table(two_gauss(), cfg, 1.0 / 16, Exec::Parallel);
  CHECK(a.table_values() == b.table_values());
}

TEST_CASE("profiles serialize to JSON and back") {
  const auto f = two_gauss();
  const auto j = f.to_json();
  CHECK(j["kind"] == "gaussian_mixture");
  const auto g = RadialProfile::from_json(j);
  for (double r : {0.0, 0.5, 2.0}) CHECK(g.value(r) == f.value(r));
  const auto doc = json::parse(R"({"kind":"gaussian_mixture","terms":[{"c":1.0,"k":1.0}],"cutoff":6.0})");
  CHECK(RadialProfile::from_json(doc).cutoff() == 6.0);
  CHECK_THROWS_AS(RadialProfile::from_json(json::parse(R"({"kind":"spline"})")), std::invalid_argument);
  const auto h = OddProfile::hermite({{1.0, 1.0}});
  const auto h2 = OddProfile::from_json(h.to_json());
  CHECK(h2.s(0.7) == h.s(0.7));
}

TEST_CASE("tabulated profiles interpolate and keep their parity") {
  std::vector<double> v;
  const double step = 1.0 / 32;
  for (int j = 0; j <= 256; ++j) v.push_back(std::exp(-std::pow(j * step, 2)));
  const auto f = RadialProfile::tabulated(step, v);
  for (double r : {0.01, 0.33, 1.2, 3.9}) CHECK(std::abs(f.value(r) - std::exp(-r * r)) < 1e-6);
  CHECK(f.value(30.0) < 1e-12 * f.max_abs());
  std::vector<double> s;
  for (int j = 0; j <= 640; ++j) s.push_back(j * step * std::exp(-std::pow(j * step, 2)));
  const auto h = OddProfile::tabulated(step, s);
  for (double t : {0.0, 0.3, 1.7, 5.0}) CHECK(h.s(-t) == -h.s(t));
  CHECK(h.s(0.0) == 0.0);
  CHECK(std::abs(h.s(0.9) - 0.9 * std::exp(-0.81)) < 1e-6);
  CHECK(std::abs(h.ds(0.9) - (1 - 2 * 0.81) * std::exp(-0.81)) < 1e-4);
}
