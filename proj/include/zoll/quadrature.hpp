#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace zoll {

struct QuadratureConfig {
  int panels = 32;                     // initial uniform panels on a finite interval
  double truncation_multiplier = 10.0; // line integrals are cut at mult*max(R,|mu|)+5
  bool symmetric_pv = true;            // principal values by pairing mu+u with mu-u
  double tolerance = 1e-9;             // relative to the L1 mass of the integrand
  int max_subdivisions = 4000;         // 0 means fixed panels with no refinement

  void validate() const;
  QuadratureConfig with_panels(int n) const {
    QuadratureConfig c = *this;
    c.panels = n;
    return c;
  }
  QuadratureConfig fixed() const {
    QuadratureConfig c = *this;
    c.max_subdivisions = 0;
    return c;
  }
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}
  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

namespace detail {

struct KronrodTable {
  std::array<double, 8> nodes;
  std::array<double, 8> kronrod;
  std::array<double, 4> gauss;  // weights at nodes 0,2,4,6
};
const KronrodTable& kronrod15();

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  double mass;
};

template <class F>
auto gk15(F& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const auto& tab = kronrod15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<T, 15> fx;
  fx[0] = f(c);
  for (int j = 1; j < 8; ++j) {
    fx[2 * j - 1] = f(c - h * tab.nodes[j]);
    fx[2 * j] = f(c + h * tab.nodes[j]);
  }
  T k = tab.kronrod[0] * fx[0];
  T g = tab.gauss[0] * fx[0];
  for (int j = 1; j < 8; ++j) {
    T pair = fx[2 * j - 1] + fx[2 * j];
    k += tab.kronrod[j] * pair;
    if (j % 2 == 0) g += tab.gauss[j / 2] * pair;
  }
  T mean = k * 0.5;
  double asc = tab.kronrod[0] * magnitude(fx[0] - mean);
  double mass = tab.kronrod[0] * magnitude(fx[0]);
  for (int j = 1; j < 8; ++j) {
    asc += tab.kronrod[j] * (magnitude(fx[2 * j - 1] - mean) + magnitude(fx[2 * j] - mean));
    mass += tab.kronrod[j] * (magnitude(fx[2 * j - 1]) + magnitude(fx[2 * j]));
  }
  asc *= std::abs(h);
  mass *= std::abs(h);
  double err = magnitude((k - g) * h);
  // QUADPACK scaling: the raw Kronrod-Gauss difference overstates the
  // error of the 15-point rule on smooth panels by many orders.
  if (asc > 0 && err > 0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  return Panel<T>{a, b, k * h, err, mass};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over consecutive segments br[0..n-1].
// Initial panels are spread over the segments by length; refinement always
// splits the panel with the largest error estimate, wherever it sits.
// Stops once the summed error is below max(tol * L1 mass, abs_floor). In
// fixed mode the result is the plain composite rule. Works for real or
// complex integrands.
template <class F>
auto integrate_segments(F&& f, const std::vector<double>& br, const QuadratureConfig& cfg,
                        double abs_floor = 0, double* mass_out = nullptr) {
  using T = std::decay_t<decltype(f(br.front()))>;
  using P = detail::Panel<T>;
  auto worse = [](const P& x, const P& y) { return x.error < y.error; };
  std::priority_queue<P, std::vector<P>, decltype(worse)> heap(worse);
  T total{};
  double err = 0, mass = 0;
  const double span = br.back() - br.front();
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const double a = br[k], b = br[k + 1];
    if (!(b > a)) continue;
    const int n = br.size() == 2 ? std::max(cfg.panels, 1)
                                 : std::max(2, static_cast<int>(std::lround(cfg.panels * (b - a) / span)));
    const double w = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      const double lo = a + i * w, hi = (i + 1 == n) ? b : a + (i + 1) * w;
      P p = detail::gk15(f, lo, hi);
      total += p.value;
      err += p.error;
      mass += p.mass;
      heap.push(p);
    }
  }
  if (cfg.max_subdivisions > 0) {
    T previous = total;
    int splits = 0;
    while (err > std::max(cfg.tolerance * mass, abs_floor) && !heap.empty()) {
      if (splits >= cfg.max_subdivisions)
        throw QuadratureError("quadrature did not converge on [" + std::to_string(br.front()) + ", " +
                                  std::to_string(br.back()) + "]",
                              detail::magnitude(previous), detail::magnitude(total));
      P p = heap.top();
      heap.pop();
      const double mid = 0.5 * (p.a + p.b);
      P l = detail::gk15(f, p.a, mid), r = detail::gk15(f, mid, p.b);
      previous = total;
      total += l.value + r.value - p.value;
      err += l.error + r.error - p.error;
      mass += l.mass + r.mass - p.mass;
      heap.push(l);
      heap.push(r);
      ++splits;
      if (err < 0) err = 0;
    }
  }
  if (mass_out) *mass_out = mass;
  return total;
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureConfig& cfg, double abs_floor = 0,
               double* mass_out = nullptr) {
  using T = std::decay_t<decltype(f(a))>;
  if (a == b) {
    if (mass_out) *mass_out = 0;
    return T{};
  }
  return integrate_segments(f, std::vector<double>{a, b}, cfg, abs_floor, mass_out);
}

// Integral over [a, inf) through t = a + s*(1-tau)/tau, tau in (0,1].
template <class F>
auto integrate_to_infinity(F&& f, double a, double scale, const QuadratureConfig& cfg,
                           double abs_floor = 0) {
  using T = std::decay_t<decltype(f(a))>;
  auto g = [&](double tau) -> T {
    if (tau <= 0) return T{};
    const double t = a + scale * (1 - tau) / tau;
    const T v = f(t);
    if (detail::magnitude(v) == 0) return T{};
    return v * (scale / (tau * tau));
  };
  QuadratureConfig c = cfg;
  c.panels = std::max(8, cfg.panels / 2);
  return integrate(g, 0.0, 1.0, c, abs_floor);
}

// Integral over [0, inf) of a function that is negligible past cut, with
// the remainder [cut, inf) added through the tail substitution. The tail is
// only resolved relative to the mass of the head.
template <class F>
auto integrate_half_line(F&& f, double cut, const QuadratureConfig& cfg) {
  double mass = 0;
  auto head = integrate(f, 0.0, cut, cfg, 0.0, &mass);
  auto tail = integrate_to_infinity(f, cut, cut, cfg, cfg.tolerance * mass);
  return head + tail;
}

// Trapezoid rule on a full period, doubled until two successive estimates
// agree. Spectrally accurate for smooth periodic integrands.
template <class F>
auto periodic_mean(F&& f, const QuadratureConfig& cfg, int max_doublings = 12) {
  using T = std::decay_t<decltype(f(0.0))>;
  int n = std::max(cfg.panels, 4);
  const double two_pi = 2 * M_PI;
  T sum{};
  double mass = 0;
  for (int i = 0; i < n; ++i) {
    T v = f(two_pi * i / n);
    sum += v;
    mass += detail::magnitude(v);
  }
  T mean = sum / static_cast<double>(n);
  if (cfg.max_subdivisions == 0) return mean;
  for (int d = 0; d < max_doublings; ++d) {
    T add{};
    for (int i = 0; i < n; ++i) {
      T v = f(two_pi * (i + 0.5) / n);
      add += v;
      mass += detail::magnitude(v);
    }
    sum += add;
    n *= 2;
    T next = sum / static_cast<double>(n);
    const double scale = mass / n;
    const double diff = detail::magnitude(next - mean);
    mean = next;
    if (diff <= cfg.tolerance * scale) return mean;
  }
  throw QuadratureError("periodic quadrature did not converge", detail::magnitude(mean),
                        detail::magnitude(sum / static_cast<double>(n)));
}

}  // namespace zoll
