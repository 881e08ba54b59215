#pragma once

// Random finite chains for property checks and the acceptance suite.

#include "active/markov.hpp"

#include <random>

namespace active {

struct RandomChain {
  FiniteGenerator generator;
  StationaryMeasure measure;
  MuFunction speed;  // mean zero under measure
};

/// Irreducible generator on n states. Reversible chains are built from a
/// random measure and symmetric flows; the others get a directed cycle of
/// extra rates on top of a sparse random matrix, so n >= 3 is required.
FiniteGenerator random_generator(std::mt19937_64& rng, Eigen::Index n, bool reversible);

/// Uniform entries in [-1, 1], centered under mu.
MuFunction random_speed(std::mt19937_64& rng, const StationaryMeasure& mu, Eigen::Index dim);

RandomChain random_chain(std::mt19937_64& rng, Eigen::Index n, Eigen::Index dim, bool reversible);

/// Uniform draw from the probability simplex (flat Dirichlet).
Vector random_simplex_point(std::mt19937_64& rng, Eigen::Index n);

}  // namespace active
