#pragma once

#include "active/markov.hpp"

#include <cmath>
#include <initializer_list>

namespace active::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline FiniteGenerator flip(double rate = 1.0) {
  Matrix j(2, 2);
  j << 0.0, rate, rate, 0.0;
  return FiniteGenerator::from_jump_rates(j);
}

/// Three-state cycle with rotation a in [-1/2, 1/2]; uniform stationary law.
inline FiniteGenerator cycle(double a) {
  Matrix m(3, 3);
  m << -1.0, 0.5 + a, 0.5 - a, 0.5 - a, -1.0, 0.5 + a, 0.5 + a, 0.5 - a, -1.0;
  return FiniteGenerator(m);
}

/// Uniformization: e^{tA} = sum_k Poisson(qt; k) (I + A/q)^k, for qt below ~500.
inline Matrix uniformized_exp(const Matrix& a, double t) {
  const double q = a.diagonal().cwiseAbs().maxCoeff() * 1.05 + 1e-12;
  const Matrix p = Matrix::Identity(a.rows(), a.cols()) + a / q;
  const int terms = static_cast<int>(q * t + 20.0 * std::sqrt(q * t) + 50.0);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  double weight = std::exp(-q * t);
  Matrix total = weight * term;
  for (int k = 1; k <= terms; ++k) {
    term = term * p;
    weight *= q * t / k;
    total += weight * term;
  }
  return total;
}

}  // namespace active::testing
