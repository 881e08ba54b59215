#pragma once

// Finite-state Markov generators and the L^2(mu) geometry they live in.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace active {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a numerical routine cannot deliver a result to the required accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tolerance {
inline constexpr double row_sum = 1e-12;    // relative to the largest rate
inline constexpr double balance = 1e-10;    // |mu^T A| for a supplied measure
inline constexpr double zero_mean = 1e-10;  // |E_mu v| relative to max|v|
inline constexpr double reversible = 1e-10;
}  // namespace tolerance

/// Rate matrix A of an irreducible continuous-time chain: A(i,j) >= 0 off the
/// diagonal, zero row sums.
class FiniteGenerator {
 public:
  /// Validates the full matrix (including its diagonal).
  explicit FiniteGenerator(Matrix rates, std::vector<std::string> labels = {});

  /// Takes the off-diagonal jump rates only; the diagonal is recomputed.
  static FiniteGenerator from_jump_rates(Matrix jump_rates, std::vector<std::string> labels = {});

  Eigen::Index size() const { return rates_.rows(); }
  const Matrix& rates() const { return rates_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return rates_(i, j); }
  double exit_rate(Eigen::Index i) const { return -rates_(i, i); }
  const std::vector<std::string>& labels() const { return labels_; }

  FiniteGenerator scaled(double factor) const;

 private:
  Matrix rates_;
  std::vector<std::string> labels_;
};

/// Strictly positive probability vector.
class StationaryMeasure {
 public:
  explicit StationaryMeasure(Vector weights);

  Eigen::Index size() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }
  double operator[](Eigen::Index i) const { return weights_(i); }

 private:
  Vector weights_;
};

/// A (possibly R^d-valued) function on the state space, stored as an n x d matrix.
class MuFunction {
 public:
  MuFunction() = default;
  MuFunction(Vector values);  // NOLINT: scalar functions convert implicitly
  MuFunction(Matrix values);  // NOLINT

  Eigen::Index size() const { return values_.rows(); }
  Eigen::Index dim() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  Vector column(Eigen::Index j) const { return values_.col(j); }
  Eigen::RowVectorXd row(Eigen::Index i) const { return values_.row(i); }

  /// Per-column mean under mu.
  Eigen::RowVectorXd mean(const StationaryMeasure& mu) const;
  MuFunction centered(const StationaryMeasure& mu) const;
  bool is_zero_mean(const StationaryMeasure& mu, double tol = tolerance::zero_mean) const;

 private:
  Matrix values_;
};

bool is_irreducible(const Matrix& rates);

/// Unique mu with mu^T A = 0, sum(mu) = 1. Throws std::invalid_argument when the
/// chain has no unique ergodic measure.
StationaryMeasure stationary_measure(const FiniteGenerator& gen);

/// Throws std::invalid_argument unless mu^T A = 0 within tolerance::balance.
void require_stationary(const FiniteGenerator& gen, const StationaryMeasure& mu);

double inner(const StationaryMeasure& mu, const Vector& f, const Vector& g);
/// sum_i mu_i <f_i, g_i> for R^d-valued functions of equal dimension.
double inner(const StationaryMeasure& mu, const MuFunction& f, const MuFunction& g);
/// d x d matrix of column-wise inner products (f_j, g_k).
Matrix gram(const StationaryMeasure& mu, const MuFunction& f, const MuFunction& g);

/// Adjoint of A in L^2(mu): A*(i,j) = mu_j A(j,i) / mu_i.
Matrix adjoint(const FiniteGenerator& gen, const StationaryMeasure& mu);

/// sym(A) = (A + A*) / 2, again an irreducible generator with ergodic measure mu.
FiniteGenerator symmetric_part(const FiniteGenerator& gen, const StationaryMeasure& mu);

/// Detailed balance mu_i A(i,j) = mu_j A(j,i).
bool is_reversible(const FiniteGenerator& gen, const StationaryMeasure& mu,
                   double tol = tolerance::reversible);

/// Zero-mean solution w of -A w = v, column by column. Requires E_mu v = 0
/// (throws std::invalid_argument "no solution: v not in range(A)" otherwise).
MuFunction solve_poisson(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v);

/// exp(t A). Symmetric eigendecomposition when A is reversible, Pade
/// scaling-and-squaring otherwise.
Matrix transition_matrix(const FiniteGenerator& gen, const StationaryMeasure& mu, double t);

/// Spectral gap -max{Re z : z eigenvalue of A, z != 0} and the largest
/// imaginary part, used to size quadrature panels.
struct SpectralScales {
  double gap = 0.0;
  double frequency = 0.0;
};
SpectralScales spectral_scales(const FiniteGenerator& gen);

/// Orthonormal coordinates for the mean-zero subspace of L^2(mu).
///
/// With D = diag(mu), f -> Q^T D^{1/2} f is an isometry from
/// {f : E_mu f = 0} onto R^{n-1}, so operators that are self-adjoint in L^2(mu)
/// become symmetric matrices there.
class ZeroMeanFrame {
 public:
  explicit ZeroMeanFrame(const StationaryMeasure& mu);

  Eigen::Index dim() const { return basis_.cols(); }
  Vector to_coords(const Vector& f) const;
  Vector from_coords(const Vector& y) const;
  /// Restriction of an operator that maps mean-zero functions to mean-zero functions.
  Matrix restrict(const Matrix& op) const;
  /// Orthonormal (in L^2(mu)) mean-zero functions, one per column.
  Matrix functions() const;

 private:
  Vector sqrt_mu_;
  Matrix basis_;  // n x (n-1), orthonormal complement of sqrt(mu)
};

}  // namespace active
