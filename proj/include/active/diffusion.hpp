#pragma once

#include "active/particle.hpp"
#include "active/state_process.hpp"

#include <string>

namespace active {

enum class DiffusionMethod { generator_solve, green_kubo, closed_form };
const char* method_name(DiffusionMethod m);

/// Limiting covariance rate lim Var(X_t)/t split into its three sources.
struct DiffusionReport {
  Matrix walk;        // 2 kappa I
  Matrix martingale;  // lambda (Sigma + c c^T); zero for the continuum variant
  Matrix active;      // (lambda^2 / gamma) [(v_i, -A^{-1} v_j) + (v_j, -A^{-1} v_i)]
  Matrix total;
  Vector drift;       // lambda c with c the mean speed
  DiffusionMethod method = DiffusionMethod::generator_solve;

  double scalar() const { return total(0, 0); }
};

/// Poisson-equation route for a finite chain with (possibly non-centered) speed v.
DiffusionReport diffusion_finite(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                 const ParticleParams& params);
DiffusionReport diffusion_finite(const FiniteChain& chain, const ParticleParams& params);

/// Integral of the stationary speed covariance on [0, inf); throws
/// NumericalError when the covariance does not decay.
Matrix integrated_covariance(const StateProcessModel& model, double tail_tol = 1e-13);

/// Green-Kubo route using stationary_covariance and panel quadrature.
DiffusionReport diffusion_green_kubo(const StateProcessModel& model, const ParticleParams& params);

/// Explicit Poisson solutions: w = x / theta (OU 1d), w = Theta^{-1} x (OU 2d),
/// w = (a sin + b cos) / (a^2 + b^2) (circle); finite chains use the generator solve.
DiffusionReport diffusion_closed_form(const StateProcessModel& model, const ParticleParams& params);

/// Exact Var(X_T) / T from a stationary start (finite horizon, no limit).
Matrix finite_horizon_covariance_rate(const StateProcessModel& model, const ParticleParams& params, double horizon);

}  // namespace active
