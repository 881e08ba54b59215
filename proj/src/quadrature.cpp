#include "active/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <array>

namespace active {

const GaussRule& gauss_legendre_30() {
  static const auto rule = [] {
    // Boost stores the non-negative half of the symmetric rule.
    using G = boost::math::quadrature::gauss<double, 30>;
    static std::array<double, 30> nodes{};
    static std::array<double, 30> weights{};
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      nodes[k] = x[i];
      weights[k++] = w[i];
      if (x[i] != 0.0) {
        nodes[k] = -x[i];
        weights[k++] = w[i];
      }
    }
    return GaussRule{std::span<const double>(nodes.data(), k), std::span<const double>(weights.data(), k)};
  }();
  return rule;
}

}  // namespace active
