#pragma once

// The explicitly solvable model on Z x {+1, -1}: a lattice walk (rate 2 kappa),
// active jumps of size +-1 at rate lambda, velocity flips at rate gamma.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace active {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

struct TwoStateParams {
  double kappa = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
  double alpha0 = 0.5;  // probability that the initial velocity is +1

  void validate() const;
};

/// M(q) = [[a, gamma], [gamma, a~]] with a = (2 kappa + lambda)(cos q - 1) - gamma + i lambda sin q
/// and a~ the same expression with sin q -> -sin q (analytic in q).
Matrix2c tilt_matrix(const TwoStateParams& p, Complex q);

/// S(q, z) = int_0^inf E[e^{i q X_t}] e^{-z t} dt in closed form.
Complex fourier_laplace(const TwoStateParams& p, double q, double z);
/// (1, 1) (z I - M(q))^{-1} (alpha0, 1 - alpha0)^T by a dense solve.
Complex fourier_laplace_resolvent(const TwoStateParams& p, double q, double z);

/// e^{t M(q)} = e^{t A} [cosh(B t) I + sinh(B t) / B N] with A the diagonal
/// mean, N = M - A I and B^2 = gamma^2 - lambda^2 sin^2 q.
Matrix2c matrix_exponential_G(const TwoStateParams& p, Complex q, double t);

/// E[e^{alpha X_t}] for the initial law (alpha0, 1 - alpha0), and its logarithm.
double mgf(const TwoStateParams& p, double alpha, double t);
double log_mgf(const TwoStateParams& p, double alpha, double t);

/// (2 kappa + lambda)(cosh alpha - 1) + sqrt(gamma^2 + lambda^2 sinh^2 alpha) - gamma.
double free_energy_closed(const TwoStateParams& p, double alpha);
/// kappa alpha^2 + sqrt(gamma^2 + lambda^2 alpha^2) - gamma.
double continuum_limit_free_energy(const TwoStateParams& p, double alpha);
/// free_energy_closed(lambda -> eps lambda, gamma -> eps^2 gamma, alpha -> eps alpha) / eps^2.
double rescaled_free_energy(const TwoStateParams& p, double alpha, double eps);

/// 2 kappa + lambda + lambda^2 / gamma.
double diffusion_constant(const TwoStateParams& p);

struct ScalingRow {
  double eps = 0.0, q = 0.0, z = 0.0;
  Complex value;  // eps^2 S(eps q, eps^2 z)
  double limit = 0.0;  // 1 / (z + q^2 sigma^2 / 2)
  double rel_error = 0.0;
};
std::vector<ScalingRow> scaling_check(const TwoStateParams& p, const std::vector<double>& eps,
                                      const std::vector<double>& qs, const std::vector<double>& zs);

}  // namespace active
