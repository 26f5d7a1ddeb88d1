#include "zoll/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace zoll {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

// Cubic spline through the mirrored samples, so that the parity of the
// extension is built into the interpolant near the origin.
Spline mirrored_spline(double step, const std::vector<double>& v, double parity, double end_slope) {
  const std::size_t n = v.size();
  std::vector<double> data(2 * n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    data[n - 1 + j] = v[j];
    data[n - 1 - j] = parity * v[j];
  }
  const double end = step * static_cast<double>(n - 1);
  return Spline(data.begin(), data.end(), -end, step, -parity * end_slope, end_slope);
}

double sampled_max(const std::function<double(double)>& f, double hi, int samples = 4000) {
  double m = 0;
  for (int i = 0; i <= samples; ++i) m = std::max(m, std::abs(f(hi * i / samples)));
  return m;
}

}  // namespace

double RadialTail::value(double r) const {
  switch (kind) {
    case Kind::Zero: return 0;
    case Kind::Gaussian: return amplitude * std::exp(-rate * r * r);
    case Kind::Power: return amplitude * std::pow(r, -rate);
  }
  return 0;
}

double RadialTail::slope(double r) const {
  switch (kind) {
    case Kind::Zero: return 0;
    case Kind::Gaussian: return -2 * rate * r * value(r);
    case Kind::Power: return -rate * value(r) / r;
  }
  return 0;
}

double RadialTail::curvature(double r) const {
  switch (kind) {
    case Kind::Zero: return 0;
    case Kind::Gaussian: return (4 * rate * rate * r * r - 2 * rate) * value(r);
    case Kind::Power: return rate * (rate + 1) * value(r) / (r * r);
  }
  return 0;
}

struct RadialProfile::Table {
  double step;
  std::vector<double> values;
  RadialTail tail;
  double end;
  Spline spline;
};

RadialProfile::RadialProfile() { finish(); }

RadialProfile RadialProfile::gaussian_mixture(std::vector<GaussianTerm> terms, double cutoff) {
  double kmin = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (!(t.k > 0)) throw std::invalid_argument("Gaussian widths must be positive");
    if (t.c != 0) kmin = std::min(kmin, t.k);
  }
  RadialProfile p;
  p.kind_ = Kind::GaussianMixture;
  p.terms_ = std::move(terms);
  if (cutoff > 0)
    p.cutoff_ = cutoff;
  else
    p.cutoff_ = std::isfinite(kmin) ? std::sqrt(std::log(1e16) / kmin) : 1.0;
  p.finish();
  return p;
}

RadialTail fit_radial_tail(double step, const std::vector<double>& v) {
  const std::size_t n = v.size() - 1;
  double vmax = 0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  RadialTail t;
  if (vmax == 0 || std::abs(v[n]) <= 1e-14 * vmax) return t;
  const std::size_t gap = std::max<std::size_t>(1, n / 16);
  if (n < 2 * gap + 1) throw std::invalid_argument("table too short to fit a tail");
  const double r1 = step * (n - gap), r2 = step * n, r0 = step * (n - 2 * gap);
  const double v1 = v[n - gap], v2 = v[n], v0 = v[n - 2 * gap];
  if (v1 * v2 <= 0 || std::abs(v1) <= std::abs(v2)) {
    // quadrature noise on an already negligible end
    if (std::max(std::abs(v1), std::abs(v2)) <= 1e-8 * vmax) return t;
    throw std::invalid_argument("tabulated values do not decay monotonically at the end of the table");
  }
  const double ratio = std::log(v1 / v2);
  RadialTail gauss{RadialTail::Kind::Gaussian, 0, ratio / (r2 * r2 - r1 * r1)};
  gauss.amplitude = v2 * std::exp(gauss.rate * r2 * r2);
  RadialTail power{RadialTail::Kind::Power, 0, ratio / std::log(r2 / r1)};
  power.amplitude = v2 * std::pow(r2, power.rate);
  const double eg = std::abs(gauss.value(r0) - v0), ep = std::abs(power.value(r0) - v0);
  return eg <= ep ? gauss : power;
}

RadialProfile RadialProfile::tabulated(double step, std::vector<double> values, double cutoff) {
  if (values.size() < 8) throw std::invalid_argument("radial table needs at least 8 knots");
  RadialTail tail = fit_radial_tail(step, values);
  return tabulated(step, std::move(values), cutoff, tail);
}

RadialProfile RadialProfile::tabulated(double step, std::vector<double> values, double cutoff,
                                       RadialTail tail) {
  if (!(step > 0)) throw std::invalid_argument("table step must be positive");
  if (values.size() < 8) throw std::invalid_argument("radial table needs at least 8 knots");
  if (tail.kind != RadialTail::Kind::Zero && !(tail.rate > 0))
    throw std::invalid_argument("tail rate must be positive");
  const double end = step * static_cast<double>(values.size() - 1);
  auto table = std::make_shared<Table>(Table{step, values, tail, end, {}});
  table->spline = mirrored_spline(step, table->values, 1.0, tail.slope(end));
  RadialProfile p;
  p.kind_ = Kind::Tabulated;
  p.table_ = std::move(table);
  p.cutoff_ = cutoff > 0 ? cutoff : end;
  p.finish();
  return p;
}

void RadialProfile::finish() {
  zero_ = true;
  if (kind_ == Kind::GaussianMixture) {
    for (const auto& t : terms_)
      if (t.c != 0) zero_ = false;
  } else {
    for (double v : table_->values)
      if (v != 0) zero_ = false;
  }
  max_abs_ = zero_ ? 0.0 : sampled_max([this](double r) { return value(r); }, 2 * cutoff_);
}

double RadialProfile::table_step() const { return table_ ? table_->step : 0.0; }
const std::vector<double>& RadialProfile::table_values() const {
  static const std::vector<double> none;
  return table_ ? table_->values : none;
}
const RadialTail& RadialProfile::tail() const {
  static const RadialTail none;
  return table_ ? table_->tail : none;
}

double RadialProfile::value(double r) const {
  r = std::abs(r);
  if (kind_ == Kind::GaussianMixture) {
    double s = 0;
    for (const auto& t : terms_) s += t.c * std::exp(-t.k * r * r);
    return s;
  }
  if (r >= table_->end) return table_->tail.value(r);
  return table_->spline(r);
}

double RadialProfile::radial_slope(double r) const {
  const double sg = r < 0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (kind_ == Kind::GaussianMixture) {
    double s = 0;
    for (const auto& t : terms_) s += -2 * t.k * r * t.c * std::exp(-t.k * r * r);
    return sg * s;
  }
  if (r >= table_->end) return sg * table_->tail.slope(r);
  return sg * table_->spline.prime(r);
}

double RadialProfile::radial_curvature(double r) const {
  r = std::abs(r);
  if (kind_ == Kind::GaussianMixture) {
    double s = 0;
    for (const auto& t : terms_) s += (4 * t.k * t.k * r * r - 2 * t.k) * t.c * std::exp(-t.k * r * r);
    return s;
  }
  if (r >= table_->end) return table_->tail.curvature(r);
  return table_->spline.double_prime(r);
}

double RadialProfile::operator()(double x1, double x2) const { return value(std::hypot(x1, x2)); }

Jet2 RadialProfile::jet(double x1, double x2) const {
  Jet2 j;
  if (kind_ == Kind::GaussianMixture) {
    const double r2 = x1 * x1 + x2 * x2;
    for (const auto& t : terms_) {
      const double e = t.c * std::exp(-t.k * r2), k = t.k;
      j.v += e;
      j.d1 += -2 * k * x1 * e;
      j.d2 += -2 * k * x2 * e;
      j.d11 += (4 * k * k * x1 * x1 - 2 * k) * e;
      j.d22 += (4 * k * k * x2 * x2 - 2 * k) * e;
      j.d12 += 4 * k * k * x1 * x2 * e;
    }
    return j;
  }
  const double r = std::hypot(x1, x2);
  const double fr = radial_slope(r), frr = radial_curvature(r);
  j.v = value(r);
  if (r < 1e-9) {
    j.d11 = j.d22 = frr;
    return j;
  }
  const double c = x1 / r, s = x2 / r, q = fr / r;
  j.d1 = fr * c;
  j.d2 = fr * s;
  j.d11 = frr * c * c + q * s * s;
  j.d22 = frr * s * s + q * c * c;
  j.d12 = (frr - q) * c * s;
  return j;
}

double RadialProfile::effective_radius(double rel) const {
  if (zero_) return 0;
  const double hi = 20 * cutoff_;
  const int n = 20000;
  const double thresh = rel * max_abs_;
  for (int i = n; i >= 0; --i) {
    const double r = hi * i / n;
    if (std::abs(value(r)) >= thresh) return std::min(hi, hi * (i + 1) / n);
  }
  return 0;
}

json RadialProfile::to_json() const {
  json j;
  if (kind_ == Kind::GaussianMixture) {
    j["kind"] = "gaussian_mixture";
    j["terms"] = json::array();
    for (const auto& t : terms_) j["terms"].push_back({{"c", t.c}, {"k", t.k}});
  } else {
    j["kind"] = "tabulated";
    j["step"] = table_->step;
    j["values"] = table_->values;
    const char* names[] = {"zero", "gaussian", "power"};
    j["tail"] = {{"kind", names[static_cast<int>(table_->tail.kind)]},
                 {"amplitude", table_->tail.amplitude},
                 {"rate", table_->tail.rate}};
  }
  j["cutoff"] = cutoff_;
  return j;
}

RadialProfile RadialProfile::from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double cutoff = j.value("cutoff", 0.0);
  if (kind == "zero") return RadialProfile();
  if (kind == "gaussian_mixture") {
    std::vector<GaussianTerm> terms;
    for (const auto& t : j.at("terms")) terms.push_back({t.at("c").get<double>(), t.at("k").get<double>()});
    return gaussian_mixture(std::move(terms), cutoff);
  }
  if (kind == "tabulated") {
    auto values = j.at("values").get<std::vector<double>>();
    const double step = j.at("step").get<double>();
    if (!j.contains("tail")) return tabulated(step, std::move(values), cutoff);
    const auto& tj = j.at("tail");
    const std::string tk = tj.at("kind").get<std::string>();
    RadialTail tail;
    if (tk == "gaussian")
      tail.kind = RadialTail::Kind::Gaussian;
    else if (tk == "power")
      tail.kind = RadialTail::Kind::Power;
    else if (tk != "zero")
      throw std::invalid_argument("unknown tail kind '" + tk + "'");
    tail.amplitude = tj.value("amplitude", 0.0);
    tail.rate = tj.value("rate", 0.0);
    return tabulated(step, std::move(values), cutoff, tail);
  }
  throw std::invalid_argument("unknown radial profile kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

struct OddProfile::Table {
  double step;
  std::vector<double> values;
  std::vector<double> tail;  // coefficients of t^-1, t^-3, t^-5
  double end;
  Spline spline;
};

OddProfile::OddProfile() = default;

OddProfile OddProfile::hermite(std::vector<GaussianTerm> terms, double cutoff) {
  double kmin = std::numeric_limits<double>::infinity();
  bool zero = true;
  for (const auto& t : terms) {
    if (!(t.k > 0)) throw std::invalid_argument("Gaussian widths must be positive");
    if (t.c != 0) {
      kmin = std::min(kmin, t.k);
      zero = false;
    }
  }
  OddProfile p;
  p.kind_ = Kind::HermiteMixture;
  p.terms_ = std::move(terms);
  p.zero_ = zero;
  p.cutoff_ = cutoff > 0 ? cutoff : (std::isfinite(kmin) ? std::sqrt(std::log(1e16) / kmin) : 1.0);
  p.max_abs_ = zero ? 0.0 : sampled_max([&p](double t) { return p.s(t); }, 2 * p.cutoff_);
  return p;
}

OddProfile OddProfile::tabulated(double step, std::vector<double> values, double cutoff) {
  if (!(step > 0)) throw std::invalid_argument("table step must be positive");
  if (values.size() < 16) throw std::invalid_argument("odd table needs at least 16 knots");
  values[0] = 0.0;
  const std::size_t n = values.size() - 1;
  const double end = step * static_cast<double>(n);
  std::vector<double> tail(3, 0.0);
  double vmax = 0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax > 0 && std::abs(values[n]) > 1e-14 * vmax) {
    const std::size_t gap = n / 8;
    Eigen::Matrix3d a;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
      const std::size_t idx = n - static_cast<std::size_t>(i) * gap;
      const double t = step * static_cast<double>(idx);
      a(i, 0) = 1 / t;
      a(i, 1) = 1 / (t * t * t);
      a(i, 2) = 1 / (t * t * t * t * t);
      b(i) = values[idx];
    }
    Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
    tail = {c(0), c(1), c(2)};
  }
  const double end_slope = -tail[0] / (end * end) - 3 * tail[1] / std::pow(end, 4) - 5 * tail[2] / std::pow(end, 6);
  auto table = std::make_shared<Table>(Table{step, values, tail, end, {}});
  table->spline = mirrored_spline(step, table->values, -1.0, end_slope);
  OddProfile p;
  p.kind_ = Kind::Tabulated;
  p.table_ = std::move(table);
  p.zero_ = vmax == 0;
  p.cutoff_ = cutoff > 0 ? cutoff : end;
  p.max_abs_ = vmax;
  return p;
}

double OddProfile::table_step() const { return table_ ? table_->step : 0.0; }
const std::vector<double>& OddProfile::table_values() const {
  static const std::vector<double> none;
  return table_ ? table_->values : none;
}
const std::vector<double>& OddProfile::tail_coefficients() const {
  static const std::vector<double> none;
  return table_ ? table_->tail : none;
}

double OddProfile::s(double t) const {
  if (zero_) return 0;
  const double sg = t < 0 ? -1.0 : 1.0;
  const double a = std::abs(t);
  if (kind_ == Kind::HermiteMixture) {
    double v = 0;
    for (const auto& g : terms_) v += g.c * a * std::exp(-g.k * a * a);
    return sg * v;
  }
  if (a == 0) return 0.0;
  if (a >= table_->end) {
    const auto& b = table_->tail;
    const double u = 1 / a, u2 = u * u;
    return sg * u * (b[0] + u2 * (b[1] + u2 * b[2]));
  }
  return sg * table_->spline(a);
}

double OddProfile::ds(double t) const {
  if (zero_) return 0;
  const double a = std::abs(t);
  if (kind_ == Kind::HermiteMixture) {
    double v = 0;
    for (const auto& g : terms_) v += g.c * (1 - 2 * g.k * a * a) * std::exp(-g.k * a * a);
    return v;
  }
  if (a >= table_->end) {
    const auto& b = table_->tail;
    const double u2 = 1 / (a * a);
    return -u2 * (b[0] + u2 * (3 * b[1] + 5 * u2 * b[2]));
  }
  return table_->spline.prime(a);
}

json OddProfile::to_json() const {
  json j;
  switch (kind_) {
    case Kind::Zero: j["kind"] = "zero"; break;
    case Kind::HermiteMixture:
      j["kind"] = "odd_hermite";
      j["terms"] = json::array();
      for (const auto& t : terms_) j["terms"].push_back({{"c", t.c}, {"k", t.k}});
      break;
    case Kind::Tabulated:
      j["kind"] = "tabulated_odd";
      j["step"] = table_->step;
      j["values"] = table_->values;
      break;
  }
  j["cutoff"] = cutoff_;
  return j;
}

OddProfile OddProfile::from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double cutoff = j.value("cutoff", 0.0);
  if (kind == "zero") return OddProfile();
  if (kind == "odd_hermite") {
    std::vector<GaussianTerm> terms;
    for (const auto& t : j.at("terms")) terms.push_back({t.at("c").get<double>(), t.at("k").get<double>()});
    return hermite(std::move(terms), cutoff);
  }
  if (kind == "tabulated_odd")
    return tabulated(j.at("step").get<double>(), j.at("values").get<std::vector<double>>(), cutoff);
  throw std::invalid_argument("unknown odd profile kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

PlaneFunction PlaneFunction::zero() {
  return {[](double, double) { return Jet2{}; }, "zero"};
}

PlaneFunction PlaneFunction::radial(const RadialProfile& f, double sign) {
  return {[f, sign](double x1, double x2) { return f.jet(x1, x2).scaled(sign); },
          sign > 0 ? "radial" : "radial_dual"};
}

PlaneFunction PlaneFunction::product_x1x2() {
  return {[](double x1, double x2) { return Jet2{x1 * x2, x2, x1, 0, 1, 0}; }, "x1*x2"};
}

PlaneFunction PlaneFunction::polynomial_patch(double a20, double a11, double a02, double a10,
                                              double a01, double a00) {
  return {[=](double x1, double x2) {
            return Jet2{a20 * x1 * x1 + a11 * x1 * x2 + a02 * x2 * x2 + a10 * x1 + a01 * x2 + a00,
                        2 * a20 * x1 + a11 * x2 + a10,
                        a11 * x1 + 2 * a02 * x2 + a01,
                        2 * a20,
                        a11,
                        2 * a02};
          },
          "quadratic"};
}

}  // namespace zoll
