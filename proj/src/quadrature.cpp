#include "zoll/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace zoll {

void QuadratureConfig::validate() const {
  if (panels < 16 || panels % 2 != 0)
    throw std::invalid_argument("quadrature panel count must be even and at least 16, got " +
                                std::to_string(panels));
  if (!(truncation_multiplier > 0)) throw std::invalid_argument("truncation multiplier must be positive");
  if (!(tolerance > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (max_subdivisions < 0) throw std::invalid_argument("max_subdivisions must be non-negative");
}

namespace detail {

const KronrodTable& kronrod15() {
  static const KronrodTable table = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    KronrodTable t{};
    const auto& x = gauss_kronrod<double, 15>::abscissa();
    const auto& w = gauss_kronrod<double, 15>::weights();
    const auto& gw = gauss<double, 7>::weights();
    for (int i = 0; i < 8; ++i) {
      t.nodes[i] = x[i];
      t.kronrod[i] = w[i];
    }
    for (int i = 0; i < 4; ++i) t.gauss[i] = gw[i];
    return t;
  }();
  return table;
}

}  // namespace detail
}  // namespace zoll
