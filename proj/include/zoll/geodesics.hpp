#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zoll/exec.hpp"
#include "zoll/surfaces.hpp"

namespace zoll {

class AsymptoticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// nu0'' = (1/2) d2 f(s, c1), nu0(0) = nu0'(0) = 0, on [-S, S].
struct Nu0Solution {
  double c1 = 0;
  double S = 0;
  double R = 0;  // effective radius used for the asymptotic fit
  double step = 0;
  double tol = 0;
  std::vector<double> s, nu, dnu;  // ascending grid over [-S, S]
  double A1 = 0, A2 = 0;           // nu0(s) = A1 |s| + A2 for |s| > R
  double fit_residual = 0;

  // Cubic Hermite inside the grid, the asymptotic line outside.
  double value(double s) const;
  double slope(double s) const;
  double evenness() const;  // max |nu0(s) - nu0(-s)| over the grid
};

// Fixed-step RK4. S defaults to 4 R_f; throws std::invalid_argument if
// S <= 3 R_f and AsymptoticError if the line fit misses by more than tol.
Nu0Solution solve_nu0(const RadialProfile& f, double c1, double S = 0, double tol = 1e-9);

// Null geodesic in the surface sigma = 0 of D+ (x4 = nu0 + q1p s + q2p) and
// its continuation in D- (x4 = -nu0 + q1m s + q2m).
struct GeodesicSpec {
  double c1 = 0, c2 = 0;
  double q1p = 0, q2p = 0;
  double q1m = 0, q2m = 0;

  // q1m = q1p and q2m = q2p + 2 A2.
  static GeodesicSpec matched(const Nu0Solution& sol, double c2, double q1, double q2);
  bool is_matched(const Nu0Solution& sol, double tol = 1e-12) const;
  // The condition in the form q2m = q1p + 2 A1.
  bool is_matched_q1_form(const Nu0Solution& sol, double tol = 1e-12) const;
};

ChartPoint geodesic_point(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, Chart chart,
                          double s, const QuadratureConfig& cfg);
Eigen::Vector4d geodesic_velocity(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                                  Chart chart, double s);
// |g(c', c')|
double null_residual(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, Chart chart,
                     double s);
// Part of nabla_{c'} c' transverse to c' (Euclidean norm).
double geodesic_equation_residual(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                                  Chart chart, double s);

// Rotation by angle of both (x1,x2) and (x3,x4); an isometry for radial f
// taking the surfaces of direction sigma to those of sigma + angle.
ChartPoint rotate_point(const ChartPoint& p, double angle);

struct JunctionReport {
  int junction = 1;                      // 1: alpha -> 0, 2: alpha -> pi
  Vec4 value_plus{}, value_minus{};      // extrapolated W coordinates at u = 0
  Vec4 slope_plus{}, slope_minus{};      // and their u-derivatives
  double value_gap = 0, slope_gap = 0;
  std::vector<double> refinement;        // gap using the first k = 2..n samples
  double gap() const { return std::max(value_gap, slope_gap); }
};

struct ClosureReport {
  JunctionReport first, second;
  double gap = 0;
};

// Matches the D+ and D- pieces in W through u = -1/s, from n_samples values
// of |u| geometrically spaced in [1e-4, 1e-2] per side, extrapolated to u = 0.
ClosureReport closure_report(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                             int n_samples, const QuadratureConfig& cfg);
double closure_gap(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec, int n_samples,
                   const QuadratureConfig& cfg);

// Endpoint classes of the fiber line through base point (a, b) of D+ with
// direction (-sin sigma, cos sigma), read off at |tau| = T.
std::pair<GrassPoint, GrassPoint> fiber_line_ends(double a, double b, double sigma, double T = 1e10);
// Distance between oriented planes: projector distance, or 2 when the
// orientations disagree.
double plane_distance(const GrassPoint& a, const GrassPoint& b);

enum class GeodesicClass { Closed, FiberLine, Unclassified };
std::string class_name(GeodesicClass c);

struct ScanEntry {
  double c1 = 0;
  std::optional<double> q1;  // empty for fiber lines
  GeodesicClass cls = GeodesicClass::Unclassified;
  double gap = 0;
  double q2m_fit = 0;       // q2 of the D- piece fitted at the first junction
  double q2m_expected = 0;  // q2p + 2 A2
  json to_json() const;
};

struct ScanReport {
  std::vector<ScanEntry> entries;
  int closed = 0, fiber = 0, failures = 0;
  json to_json() const;
};

// For each (c1, q1): fit the D- piece at the first junction and require the
// second junction to close within tol. One fiber line per c1 is checked
// against the surface endpoints.
ScanReport zollfrei_scan(const RadialProfile& f, const std::vector<double>& c1s, const std::vector<double>& q1s,
                         double tol, const QuadratureConfig& cfg, Exec ex = Exec::Parallel);

std::string trace_csv_header();
// Rows "branch,s,x1,x2,x3,x4" over both charts.
std::string trace_csv(const RadialProfile& f, const Nu0Solution& sol, const GeodesicSpec& spec,
                      const std::vector<double>& s_values, const QuadratureConfig& cfg);

}  // namespace zoll
