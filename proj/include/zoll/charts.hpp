#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "zoll/profiles.hpp"

namespace zoll {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat42 = Eigen::Matrix<double, 4, 2>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// D+ and D- are the two hemispheres seen from the poles, W the band around
// the equator. Coordinates: (x1,x2,x3,x4) on D+-, (alpha,beta,eps1,eps2) on W.
enum class Chart { DPlus, DMinus, W };
std::string chart_name(Chart c);
Chart chart_from_name(const std::string& s);

struct ChartPoint {
  Chart chart = Chart::DPlus;
  Vec4 coords{};
  std::optional<cplx> fiber;  // zeta on D+-, xi on W

  json to_json() const;
  static ChartPoint from_json(const json& j);
};

// Oriented 2-plane in R^4 given by a rank-2 4x2 matrix; two matrices give the
// same point when they differ by a right factor of positive determinant.
class GrassPoint {
 public:
  explicit GrassPoint(const Mat42& m);
  const Mat42& matrix() const { return m_; }

  struct NormalForm {
    int row_a = 0, row_b = 1;  // pivot rows brought to the identity
    Mat42 reduced;
    int orientation = 1;       // sign of det of the pivot block
  };
  // Pivot pair with the largest 2x2 minor.
  NormalForm normal_form() const;
  NormalForm normal_form(int row_a, int row_b) const;
  bool same_class(const GrassPoint& other, double tol = 1e-12) const;
  bool at_infinity(double tol = 1e-14) const;

  json to_json() const;  // row-major 8 numbers
  static GrassPoint from_json(const json& j);

 private:
  Mat42 m_;
};

struct InfinityTag {
  Vec3 t{};
  Vec3 v{};
};

GrassPoint embed(const ChartPoint& p);
GrassPoint infinity_point(const Vec3& t, const Vec3& v);
// Same plane with the opposite orientation.
GrassPoint antipodal(const GrassPoint& g);

// Coordinates of the class in the given chart, or the tag when the class
// lies on the sphere at infinity. Throws DomainError if the class is finite
// but outside the chart.
std::variant<ChartPoint, InfinityTag> normalize(const GrassPoint& g, Chart chart);
// Tries D+, D-, then W.
std::variant<ChartPoint, InfinityTag> normalize_any(const GrassPoint& g);

// Closed-form coordinate change, fiber included when present.
ChartPoint transition(const ChartPoint& p, Chart target);

// Affine chart around the sphere at infinity:
// [[u1,-u4],[1,0],[0,1],[u2,u3]]. For u2 < 0 it lies in D+.
GrassPoint u_chart_point(const Vec4& u);
Vec4 u_to_dplus(const Vec4& u);
// Jacobian d(x1..x4)/d(u1..u4) of u_to_dplus.
Eigen::Matrix4d u_to_dplus_jacobian(const Vec4& u);

}  // namespace zoll
