#pragma once

#include "active/markov.hpp"

#include <cmath>
#include <span>

namespace active {

/// 30-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};
const GaussRule& gauss_legendre_30();

/// Integral of a matrix-valued f over [a, b] split into panels no wider than max_panel.
template <class F>
Matrix integrate_panels(F&& f, double a, double b, double max_panel) {
  const GaussRule& rule = gauss_legendre_30();
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double h = (b - a) / panels;
  Matrix total;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double r = mid + 0.5 * h * rule.nodes[k];
      Matrix term = (0.5 * h * rule.weights[k]) * f(r);
      if (total.size() == 0)
        total = std::move(term);
      else
        total += term;
    }
  }
  return total;
}

struct TailControl {
  double decay_rate = 0.0;  // f(r) = O(exp(-decay_rate * r))
  double frequency = 0.0;   // oscillation frequency, 0 if none
  double tail_tol = 1e-12;  // required bound on the neglected tail
  int max_panels = 200000;
};

/// Integral of f over [0, inf) for an exponentially decaying f. Panels extend
/// until ||f(r)|| / decay_rate drops below tail_tol; throws NumericalError when
/// the decay rate is not positive or the bound is not reached.
template <class F>
Matrix integrate_to_infinity(F&& f, const TailControl& ctl) {
  if (!(ctl.decay_rate > 1e-12) || !std::isfinite(ctl.decay_rate))
    throw NumericalError("quadrature tail bound not achievable: covariance does not decay");
  const GaussRule& rule = gauss_legendre_30();
  // A panel spans at most one decay length and one radian of oscillation, so
  // the largest |f| over its nodes tracks the envelope.
  const double width = 1.0 / std::max(ctl.decay_rate, ctl.frequency);
  Matrix total;
  for (int p = 0; p < ctl.max_panels; ++p) {
    const double mid = (p + 0.5) * width;
    double envelope = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      Matrix value = f(mid + 0.5 * width * rule.nodes[k]);
      envelope = std::max(envelope, value.cwiseAbs().maxCoeff());
      value *= 0.5 * width * rule.weights[k];
      if (total.size() == 0)
        total = std::move(value);
      else
        total += value;
    }
    const double end = (p + 1) * width;
    if (end * ctl.decay_rate > 5.0 && envelope / ctl.decay_rate < ctl.tail_tol) return total;
  }
  throw NumericalError("quadrature tail bound not achievable within the panel budget");
}

}  // namespace active
