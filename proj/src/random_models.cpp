#include "active/random_models.hpp"

#include <stdexcept>

namespace active {

FiniteGenerator random_generator(std::mt19937_64& rng, Eigen::Index n, bool reversible) {
  if (n < 2) throw std::invalid_argument("need at least 2 states");
  if (!reversible && n < 3) throw std::invalid_argument("every 2-state chain is reversible");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix jumps = Matrix::Zero(n, n);
  if (reversible) {
    Vector mu(n);
    for (Eigen::Index i = 0; i < n; ++i) mu(i) = 0.2 + unit(rng);
    mu /= mu.sum();
    Matrix flow = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        // the path i -- i+1 keeps the chain irreducible
        if (j == i + 1 || unit(rng) < 0.6) flow(i, j) = flow(j, i) = 0.05 + unit(rng);
      }
    for (Eigen::Index i = 0; i < n; ++i) jumps.row(i) = flow.row(i) / mu(i);
    // keep rates of order one
    jumps *= static_cast<double>(n - 1) / jumps.rowwise().sum().mean();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j && unit(rng) < 0.6) jumps(i, j) = 0.05 + 1.5 * unit(rng);
      jumps(i, (i + 1) % n) += 0.1 + unit(rng);
    }
  }
  return FiniteGenerator::from_jump_rates(jumps);
}

MuFunction random_speed(std::mt19937_64& rng, const StationaryMeasure& mu, Eigen::Index dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix v(mu.size(), dim);
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index k = 0; k < dim; ++k) v(i, k) = u(rng);
  return MuFunction(v).centered(mu);
}

RandomChain random_chain(std::mt19937_64& rng, Eigen::Index n, Eigen::Index dim, bool reversible) {
  FiniteGenerator gen = random_generator(rng, n, reversible);
  StationaryMeasure mu = stationary_measure(gen);
  MuFunction v = random_speed(rng, mu, dim);
  return {std::move(gen), std::move(mu), std::move(v)};
}

Vector random_simplex_point(std::mt19937_64& rng, Eigen::Index n) {
  std::exponential_distribution<double> e(1.0);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = e(rng) + 1e-3;
  return x / x.sum();
}

}  // namespace active
