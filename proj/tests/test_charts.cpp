#include <doctest.h>

#include <cmath>
#include <random>

#include "zoll/charts.hpp"

using namespace zoll;

namespace {

ChartPoint dpt(Chart c, double x1, double x2, double x3, double x4) { return {c, {x1, x2, x3, x4}, {}}; }

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2 * M_PI)); }

double coord_gap(const ChartPoint& a, const ChartPoint& b) {
  double g = 0;
  for (int i = 0; i < 4; ++i)
    g = std::max(g, (a.chart == Chart::W && i == 0) ? angle_gap(a.coords[0], b.coords[0])
                                                    : std::abs(a.coords[i] - b.coords[i]));
  if (a.fiber && b.fiber) g = std::max(g, std::abs(*a.fiber - *b.fiber));
  return g;
}

ChartPoint as_chart(const std::variant<ChartPoint, InfinityTag>& v) {
  REQUIRE(std::holds_alternative<ChartPoint>(v));
  return std::get<ChartPoint>(v);
}

// Chart-independent image of a fibered point: the q-map to CP^2 of the
// standard structure, (1 : zeta : -x1 - x2 zeta) on D+- and
// (-xi cos(a) tan(b) - sin(a) : -xi sin(a) tan(b) + cos(a) : xi) on W.
std::array<cplx, 3> q_map(const ChartPoint& p) {
  const cplx z = *p.fiber;
  if (p.chart == Chart::W) {
    const double a = p.coords[0], t = std::tan(p.coords[1]);
    return {-z * std::cos(a) * t - std::sin(a), -z * std::sin(a) * t + std::cos(a), z};
  }
  return {1.0, z, -p.coords[0] - p.coords[1] * z};
}

double projective_gap(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b) {
  double g = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g = std::max(g, std::abs(a[i] * b[j] - a[j] * b[i]));
  return g;
}

}  // namespace

TEST_CASE("transition examples with the coordinate formulas read off the embeddings") {
  // The embedding matrices force x3 = -e1 sin(a) cot(b) - e2 cos(a), x4 = e1 cos(a) cot(b) - e2 sin(a).
  const ChartPoint w{Chart::W, {0, M_PI / 4, 0, 1}, {}};
  const ChartPoint d = transition(w, Chart::DPlus);
  CHECK(coord_gap(d, dpt(Chart::DPlus, 1, 0, -1, 0)) < 1e-15);
  CHECK(embed(w).same_class(embed(d)));

  ChartPoint wf{Chart::W, {0, M_PI / 4, 0, 0}, cplx(1, 0)};
  CHECK(std::abs(*transition(wf, Chart::DPlus).fiber - cplx(-1, 0)) < 1e-15);
}

TEST_CASE("transitions are mutually inverse on overlaps") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3), ang(-M_PI, M_PI), pos(0.05, 1.5), im(0, 2);
  for (int k = 0; k < 50; ++k) {
    for (Chart d : {Chart::DPlus, Chart::DMinus}) {
      const double sgn = d == Chart::DPlus ? 1 : -1;
      ChartPoint p = dpt(d, u(rng), u(rng), u(rng), u(rng));
      p.fiber = cplx(u(rng), sgn * im(rng));
      const ChartPoint w = transition(p, Chart::W);
      CHECK(w.fiber->imag() >= 0);
      CHECK(coord_gap(transition(w, d), p) < 1e-12);
      CHECK(projective_gap(q_map(p), q_map(w)) < 1e-12 * (1 + std::abs(*w.fiber)) * (1 + std::abs(*p.fiber)));

      ChartPoint q{Chart::W, {ang(rng), sgn * pos(rng), u(rng), u(rng)}, cplx(u(rng), im(rng))};
      CHECK(coord_gap(transition(transition(q, d), Chart::W), q) < 1e-11);
    }
    // The open hemispheres are disjoint.
    CHECK_THROWS_AS(transition(dpt(Chart::DPlus, u(rng), u(rng), 0, 0), Chart::DMinus), DomainError);
  }
}

TEST_CASE("transition agrees with normalizing the embedded matrix") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int k = 0; k < 50; ++k) {
    for (Chart d : {Chart::DPlus, Chart::DMinus}) {
      const ChartPoint p = dpt(d, u(rng), u(rng), u(rng), u(rng));
      const ChartPoint w = transition(p, Chart::W);
      CHECK(coord_gap(as_chart(normalize(embed(p), Chart::W)), w) < 1e-12);
      CHECK(embed(p).same_class(embed(w)));
      CHECK(coord_gap(as_chart(normalize(embed(w), d)), p) < 1e-11);
    }
  }
}

TEST_CASE("transition refuses points outside the overlap") {
  CHECK_THROWS_AS(transition(dpt(Chart::DPlus, 0, 0, 1, 2), Chart::W), DomainError);
  CHECK_THROWS_AS(transition({Chart::W, {0.3, 0, 1, 1}, {}}, Chart::DPlus), DomainError);
  CHECK_THROWS_AS(transition({Chart::W, {0.3, M_PI / 2, 1, 1}, {}}, Chart::DPlus), DomainError);
  CHECK_THROWS_AS(transition({Chart::W, {0.3, 0.2, 1, 1}, {}}, Chart::DMinus), DomainError);
  ChartPoint bad = dpt(Chart::DPlus, 1, 1, 0, 0);
  bad.fiber = cplx(0, -1);
  CHECK_THROWS_AS(transition(bad, Chart::W), DomainError);
  try {
    transition(dpt(Chart::DMinus, 0, 0, 0, 0), Chart::W);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("pole") != std::string::npos);
  }
}

TEST_CASE("embedding examples") {
  Mat42 expect;
  expect << 0, 0, 0, 0, 1, 0, 0, 1;
  CHECK(embed(dpt(Chart::DPlus, 0, 0, 0, 0)).matrix() == expect);
  const GrassPoint w = embed({Chart::W, {0, 0, 0.5, 2}, {}});
  Mat42 ew;
  ew << 1, 0, 0, -2, 0, 0.5, 0, 1;
  CHECK((w.matrix() - ew).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(embed({Chart::DPlus, {0, 0, 0, 0}, cplx(0, 1)}), DomainError);
}

TEST_CASE("embedding is injective per chart and normalize inverts it") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2), ang(-M_PI, M_PI), b(-1.4, 1.4);
  std::vector<GrassPoint> seen;
  for (int k = 0; k < 30; ++k) {
    for (Chart c : {Chart::DPlus, Chart::DMinus, Chart::W}) {
      ChartPoint p = c == Chart::W ? ChartPoint{c, {ang(rng), b(rng), u(rng), u(rng)}, {}}
                                   : dpt(c, u(rng), u(rng), u(rng), u(rng));
      const GrassPoint g = embed(p);
      CHECK(coord_gap(as_chart(normalize(g, c)), p) < 1e-12);
      const GrassPoint back = embed(as_chart(normalize(g, c)));
      CHECK(back.same_class(g));
      for (const auto& s : seen) CHECK_FALSE(s.same_class(g, 1e-9));
      seen.push_back(g);
    }
  }
}

TEST_CASE("class equality follows positive right factors only") {
  const GrassPoint g = embed(dpt(Chart::DPlus, 0.3, -1.2, 2.0, 0.7));
  Eigen::Matrix2d r;
  r << 2.0, -1.0, 0.5, 3.0;
  CHECK(GrassPoint(g.matrix() * r).same_class(g));
  Eigen::Matrix2d flip;
  flip << 1.0, 0.0, 0.0, -1.0;
  CHECK_FALSE(GrassPoint(g.matrix() * flip).same_class(g));
  CHECK_THROWS_AS(GrassPoint(Mat42::Zero()), std::invalid_argument);
}

TEST_CASE("points at infinity and the antipodal involution") {
  const GrassPoint p = infinity_point({0, 0, 1}, {1, 0, 0});
  Mat42 expect;
  expect << 0, -1, 0, 0, 1, 0, 0, 0;
  CHECK(p.matrix() == expect);
  CHECK(antipodal(antipodal(p)).same_class(p));
  CHECK_FALSE(antipodal(p).same_class(p));
  CHECK_THROWS_AS(infinity_point({0, 0, 2}, {1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(infinity_point({0, 0, 1}, {0, 0.6, 0.8}), std::invalid_argument);
  const auto tag = normalize(p, Chart::DPlus);
  REQUIRE(std::holds_alternative<InfinityTag>(tag));
  const InfinityTag t = std::get<InfinityTag>(tag);
  CHECK(infinity_point(t.t, t.v).same_class(p));
}

TEST_CASE("U-chart points with u2 < 0 land in D+ with x3 < 0") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2), neg(-2, -0.1);
  for (int k = 0; k < 20; ++k) {
    const Vec4 uu = {u(rng), neg(rng), u(rng), u(rng)};
    const ChartPoint d = as_chart(normalize(u_chart_point(uu), Chart::DPlus));
    CHECK(d.coords[2] < 0);
    const Vec4 x = u_to_dplus(uu);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - d.coords[i]) < 1e-12 * (1 + std::abs(x[i])));
    // Jacobian against central differences
    const Eigen::Matrix4d j = u_to_dplus_jacobian(uu);
    for (int c = 0; c < 4; ++c) {
      Vec4 a = uu, b = uu;
      a[c] += 1e-6;
      b[c] -= 1e-6;
      const Vec4 xa = u_to_dplus(a), xb = u_to_dplus(b);
      for (int r = 0; r < 4; ++r) CHECK(std::abs((xa[r] - xb[r]) / 2e-6 - j(r, c)) < 1e-5 * (1 + std::abs(j(r, c))));
    }
  }
  CHECK_THROWS_AS(u_to_dplus({0, 0, 1, 1}), DomainError);
}

TEST_CASE("chart points and classes serialize to JSON") {
  ChartPoint p{Chart::W, {0.1, 0.2, 0.3, 0.4}, cplx(1, 2)};
  const auto j = p.to_json();
  CHECK(j["chart"] == "W");
  const ChartPoint q = ChartPoint::from_json(j);
  CHECK(coord_gap(p, q) == 0.0);
  const GrassPoint g = embed(dpt(Chart::DMinus, 1, 2, 3, 4));
  CHECK(g.to_json().size() == 8);
  CHECK(GrassPoint::from_json(g.to_json()).matrix() == g.matrix());
  CHECK_THROWS_AS(chart_from_name("V"), std::invalid_argument);
}
