#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace zoll {

using cplx = std::complex<double>;
using json = nlohmann::json;

// Value, gradient and Hessian of a function on the plane.
struct Jet2 {
  double v = 0, d1 = 0, d2 = 0, d11 = 0, d12 = 0, d22 = 0;
  Jet2 scaled(double s) const { return {s * v, s * d1, s * d2, s * d11, s * d12, s * d22}; }
  double laplacian() const { return d11 + d22; }
};

struct GaussianTerm {
  double c = 0;
  double k = 1;
};

// Tail model beyond the last knot of a table.
struct RadialTail {
  enum class Kind { Zero, Gaussian, Power };
  Kind kind = Kind::Zero;
  double amplitude = 0;
  double rate = 0;  // Gaussian: A exp(-rate r^2), Power: A r^-rate
  double value(double r) const;
  double slope(double r) const;
  double curvature(double r) const;
};

// Fits a Gaussian or power tail through the last knots of values[j] = v(j*step),
// keeping whichever model better predicts an earlier knot. Returns a zero
// tail when the table has already decayed below 1e-14 of its maximum.
RadialTail fit_radial_tail(double step, const std::vector<double>& values);

class RadialProfile {
 public:
  enum class Kind { GaussianMixture, Tabulated };

  RadialProfile();  // f == 0
  static RadialProfile gaussian_mixture(std::vector<GaussianTerm> terms, double cutoff = 0);
  // values[j] = f(j*step); the tail is fitted from the last knots when not given.
  static RadialProfile tabulated(double step, std::vector<double> values, double cutoff = 0);
  static RadialProfile tabulated(double step, std::vector<double> values, double cutoff,
                                 RadialTail tail);

  Kind kind() const { return kind_; }
  const std::vector<GaussianTerm>& terms() const { return terms_; }
  double cutoff() const { return cutoff_; }
  bool is_zero() const { return zero_; }
  double max_abs() const { return max_abs_; }
  double table_step() const;
  const std::vector<double>& table_values() const;
  const RadialTail& tail() const;

  double value(double r) const;
  double radial_slope(double r) const;
  double radial_curvature(double r) const;
  double operator()(double x1, double x2) const;
  Jet2 jet(double x1, double x2) const;

  // Smallest radius past which |f| stays below rel*max|f| (sampled).
  double effective_radius(double rel = 1e-12) const;

  json to_json() const;
  static RadialProfile from_json(const json& j);

 private:
  struct Table;
  Kind kind_ = Kind::GaussianMixture;
  std::vector<GaussianTerm> terms_;
  std::shared_ptr<const Table> table_;
  double cutoff_ = 1;
  double max_abs_ = 0;
  bool zero_ = true;
  void finish();
};

// Odd imaginary function on the line stored through its real factor:
// h(t) = i*s(t), s(-t) = -s(t).
class OddProfile {
 public:
  enum class Kind { Zero, HermiteMixture, Tabulated };

  OddProfile();  // h == 0
  // s(t) = sum c t exp(-k t^2)
  static OddProfile hermite(std::vector<GaussianTerm> terms, double cutoff = 0);
  // values[j] = s(j*step), values[0] is forced to 0. Beyond the table s is
  // continued by b1/t + b3/t^3 + b5/t^5 fitted on the last knots.
  static OddProfile tabulated(double step, std::vector<double> values, double cutoff = 0);

  Kind kind() const { return kind_; }
  bool is_zero() const { return zero_; }
  double cutoff() const { return cutoff_; }
  double max_abs() const { return max_abs_; }
  const std::vector<GaussianTerm>& terms() const { return terms_; }
  double table_step() const;
  const std::vector<double>& table_values() const;
  const std::vector<double>& tail_coefficients() const;

  double s(double t) const;
  double ds(double t) const;
  cplx h(double t) const { return {0.0, s(t)}; }
  cplx dh(double t) const { return {0.0, ds(t)}; }

  json to_json() const;
  static OddProfile from_json(const json& j);

 private:
  struct Table;
  Kind kind_ = Kind::Zero;
  std::vector<GaussianTerm> terms_;
  std::shared_ptr<const Table> table_;
  double cutoff_ = 1;
  double max_abs_ = 0;
  bool zero_ = true;
};

// General smooth function on a bounded box, for harmonic patches and for
// the signed profiles of the dual metric.
struct PlaneFunction {
  std::function<Jet2(double, double)> jet;
  std::string name;

  double operator()(double x1, double x2) const { return jet(x1, x2).v; }
  static PlaneFunction zero();
  static PlaneFunction radial(const RadialProfile& f, double sign = 1.0);
  static PlaneFunction product_x1x2();
  static PlaneFunction polynomial_patch(double a20, double a11, double a02, double a10 = 0,
                                        double a01 = 0, double a00 = 0);
};

}  // namespace zoll
