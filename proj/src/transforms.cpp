#include "zoll/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace zoll {

namespace {

double truncation(const QuadratureConfig& cfg, double extent, double mu) {
  return cfg.truncation_multiplier * std::max(extent, std::abs(mu)) + 5.0;
}

}  // namespace

void LineFunction::check_sigma_independence(double tol) const {
  if (!sigma_independent) return;
  const double mus[] = {-2.0, -0.5, 0.0, 0.75, 1.5};
  for (double mu : mus) {
    const cplx ref = fn(0.0, mu);
    for (int k = 1; k < 8; ++k) {
      const cplx v = fn(2 * M_PI * k / 8, mu);
      if (std::abs(v - ref) > tol * std::max(1.0, std::abs(ref)))
        throw std::invalid_argument("line function flagged sigma-independent varies with sigma at mu=" +
                                    std::to_string(mu));
    }
  }
}

LineFunction LineFunction::of_mu(std::function<cplx(double)> g, bool even) {
  LineFunction l;
  l.fn = [g = std::move(g)](double, double mu) { return g(mu); };
  l.even_in_mu = even;
  l.sigma_independent = true;
  return l;
}

double radon(const RadialProfile& f, double mu, const QuadratureConfig& cfg) {
  cfg.validate();
  if (f.is_zero()) return 0.0;
  const double m2 = mu * mu;
  auto g = [&](double t) { return f.value(std::sqrt(t * t + m2)); };
  return 2.0 * integrate_half_line(g, truncation(cfg, f.cutoff(), 0.0), cfg);
}

double radon_along(const RadialProfile& f, double sigma, double mu, const QuadratureConfig& cfg) {
  return half_radon(f, sigma, mu, +1, cfg) - half_radon(f, sigma, mu, -1, cfg);
}

double half_radon(const RadialProfile& f, double sigma, double mu, int sign,
                  const QuadratureConfig& cfg) {
  cfg.validate();
  if (sign != 1 && sign != -1) throw std::invalid_argument("half_radon sign must be +1 or -1");
  if (f.is_zero()) return 0.0;
  const double c = std::cos(sigma), s = std::sin(sigma);
  auto g = [&](double t) {
    const double tt = sign * t;
    return f(c * tt - s * mu, s * tt + c * mu);
  };
  return sign * integrate_half_line(g, truncation(cfg, f.cutoff(), 0.0), cfg);
}

cplx dual_radon(const LineFunction& phi, double x1, double x2, const QuadratureConfig& cfg) {
  cfg.validate();
  return periodic_mean(
      [&](double sigma) { return phi(sigma, -x1 * std::sin(sigma) + x2 * std::cos(sigma)); }, cfg);
}

namespace {

// Integral of g over [0, inf) with breakpoints where mu+-u crosses the edge
// of the region in which phi lives, so that a far-away bump is never
// straddled by a single coarse panel.
template <class G>
cplx split_half_line(G& g, double mu, double extent, double cut, const QuadratureConfig& cfg) {
  const double a = std::abs(mu);
  std::vector<double> br = {0.0, std::abs(a - extent), a + extent, cut};
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  while (br.back() > cut) br.pop_back();
  if (br.back() < cut) br.push_back(cut);
  double mass = 0;
  const cplx head = integrate_segments(g, br, cfg, 0.0, &mass);
  return head + integrate_to_infinity(g, cut, cut, cfg, cfg.tolerance * mass);
}

}  // namespace

cplx hilbert(const LineProfile& phi, double mu, const QuadratureConfig& cfg) {
  cfg.validate();
  const double cut = truncation(cfg, phi.extent, mu);
  try {
    cplx pv;
    auto g = [&](double u) { return (phi(mu + u) - phi(mu - u)) / u; };
    if (cfg.symmetric_pv) {
      pv = split_half_line(g, mu, phi.extent, cut, cfg);
    } else {
      // Subtracted form: the phi(mu)/(nu-mu) part integrates to zero over
      // a window symmetric about the pole.
      const cplx p0 = phi(mu);
      auto s = [&](double nu) {
        const double d = nu - mu;
        return d == 0 ? cplx{} : (phi(nu) - p0) / d;
      };
      pv = integrate(s, mu - cut, mu + cut, cfg.with_panels(2 * cfg.panels));
      pv += integrate_to_infinity(g, cut, cut, cfg);
    }
    return cplx(0.0, 1.0 / M_PI) * pv;
  } catch (const QuadratureError& e) {
    throw QuadratureError("principal value near the pole at mu=" + std::to_string(mu) + ": " + e.what(),
                          e.previous(), e.last());
  }
}

LineProfile tabulate_line(const LineProfile& phi, double half_width, double step, Exec ex) {
  const std::size_t n = static_cast<std::size_t>(std::ceil(half_width / step));
  const double left = -step * static_cast<double>(n);
  std::vector<double> re(2 * n + 1), im(2 * n + 1);
  for_each_index(ex, 2 * n + 1, [&](std::size_t i) {
    const cplx v = phi(left + step * static_cast<double>(i));
    re[i] = v.real();
    im[i] = v.imag();
  });
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto sre = std::make_shared<Spline>(re.begin(), re.end(), left, step);
  auto sim = std::make_shared<Spline>(im.begin(), im.end(), left, step);
  const double edge = -left;
  return {[sre, sim, edge, phi](double mu) {
            if (std::abs(mu) >= edge) return phi(mu);
            return cplx((*sre)(mu), (*sim)(mu));
          },
          phi.extent};
}

std::vector<cplx> hilbert_sweep(const LineProfile& phi, const std::vector<double>& mus,
                                const QuadratureConfig& cfg, Exec ex) {
  std::vector<cplx> out(mus.size());
  for_each_index(ex, mus.size(), [&](std::size_t i) { out[i] = hilbert(phi, mus[i], cfg); });
  return out;
}

RadialProfile radon_table(const RadialProfile& f, const QuadratureConfig& cfg, double step, Exec ex) {
  cfg.validate();
  const double end = truncation(cfg, f.cutoff(), 0.0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(end / step));
  std::vector<double> values(n + 1, 0.0);
  if (!f.is_zero())
    for_each_index(ex, n + 1, [&](std::size_t j) { values[j] = radon(f, step * j, cfg); });
  return RadialProfile::tabulated(step, std::move(values), end);
}

std::vector<std::array<double, 2>> unit_grid_3x3() {
  std::vector<std::array<double, 2>> g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.push_back({double(i), double(j)});
  return g;
}

InversionReport inversion_report(const RadialProfile& f, const std::vector<std::array<double, 2>>& grid,
                                 const QuadratureConfig& cfg, Exec ex) {
  cfg.validate();
  InversionReport rep;
  rep.exact.reserve(grid.size());
  double rho = 0;
  for (const auto& x : grid) {
    const double r = std::hypot(x[0], x[1]);
    if (r > cfg.truncation_multiplier * f.cutoff())
      throw std::invalid_argument("inversion grid point outside the truncation radius");
    rho = std::max(rho, r);
    rep.exact.push_back(f.value(r));
  }
  if (f.is_zero()) {
    rep.reconstructed.assign(grid.size(), 0.0);
    return rep;
  }

  // The table step follows the quadrature step so that refining one refines
  // both; 32 panels gives 1/64.
  const RadialProfile fhat = radon_table(f, cfg, 1.0 / (2 * cfg.panels), ex);
  const LineProfile line{[&fhat](double mu) { return cplx(fhat.value(mu), 0.0); }, f.cutoff()};

  // H fhat on a fine mu-grid, then 5-point central differences.
  const double h = 1e-3;
  const int half = static_cast<int>(std::ceil(rho / h)) + 4;
  std::vector<double> mus(2 * half + 1);
  for (int k = -half; k <= half; ++k) mus[k + half] = k * h;
  const std::vector<cplx> hv = hilbert_sweep(line, mus, cfg, ex);
  const int m = 2 * half - 3;  // derivative samples at k = -half+2 .. half-2
  std::vector<double> dre(m), dim(m);
  for (int i = 0; i < m; ++i) {
    const int k = i + 2;
    const cplx d = (-hv[k + 2] + 8.0 * hv[k + 1] - 8.0 * hv[k - 1] + hv[k - 2]) / (12.0 * h);
    dre[i] = d.real();
    dim[i] = d.imag();
  }
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  const double left = mus[2];
  const Spline sre(dre.begin(), dre.end(), left, h), sim(dim.begin(), dim.end(), left, h);
  const LineFunction deriv =
      LineFunction::of_mu([&](double mu) { return cplx(sre(mu), sim(mu)); }, true);

  rep.reconstructed.resize(grid.size());
  std::vector<double> residue(grid.size());
  for_each_index(ex, grid.size(), [&](std::size_t i) {
    const cplx v = cplx(0.0, 0.5) * dual_radon(deriv, grid[i][0], grid[i][1], cfg);
    rep.reconstructed[i] = v.real();
    residue[i] = std::abs(v.imag());
  });
  const double scale = f.max_abs();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rep.residual = std::max(rep.residual, std::abs(rep.reconstructed[i] - rep.exact[i]) / scale);
    rep.imaginary_residue = std::max(rep.imaginary_residue, residue[i] / scale);
  }
  return rep;
}

double inversion_residual(const RadialProfile& f, const std::vector<std::array<double, 2>>& grid,
                          const QuadratureConfig& cfg, Exec ex) {
  return inversion_report(f, grid, cfg, ex).residual;
}

}  // namespace zoll
