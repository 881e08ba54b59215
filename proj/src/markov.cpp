#include "active/markov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <queue>

namespace active {
namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<bool> reachable(const Matrix& rates, bool forward) {
  const Eigen::Index n = rates.rows();
  std::vector<bool> seen(n, false);
  std::queue<Eigen::Index> todo;
  seen[0] = true;
  todo.push(0);
  while (!todo.empty()) {
    const Eigen::Index i = todo.front();
    todo.pop();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = forward ? rates(i, j) : rates(j, i);
      if (j != i && r > 0.0 && !seen[j]) {
        seen[j] = true;
        todo.push(j);
      }
    }
  }
  return seen;
}

}  // namespace

FiniteGenerator::FiniteGenerator(Matrix rates, std::vector<std::string> labels)
    : rates_(std::move(rates)), labels_(std::move(labels)) {
  const Eigen::Index n = rates_.rows();
  if (n == 0 || rates_.cols() != n) throw std::invalid_argument("generator must be a non-empty square matrix");
  if (!rates_.allFinite()) throw std::invalid_argument("generator has non-finite entries");
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != n)
    throw std::invalid_argument("generator labels do not match the state count");
  const double scale = std::max(1.0, max_abs(rates_));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && rates_(i, j) < 0.0) throw std::invalid_argument("negative off-diagonal rate");
    if (std::abs(rates_.row(i).sum()) > tolerance::row_sum * scale)
      throw std::invalid_argument("generator row " + std::to_string(i) + " does not sum to zero");
  }
  if (!is_irreducible(rates_)) throw std::invalid_argument("reducible chain: no unique ergodic measure");
}

FiniteGenerator FiniteGenerator::from_jump_rates(Matrix jump_rates, std::vector<std::string> labels) {
  if (jump_rates.rows() != jump_rates.cols()) throw std::invalid_argument("generator must be square");
  jump_rates.diagonal().setZero();
  jump_rates.diagonal() = -jump_rates.rowwise().sum();
  return FiniteGenerator(std::move(jump_rates), std::move(labels));
}

FiniteGenerator FiniteGenerator::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("generator scale must be positive");
  return FiniteGenerator(rates_ * factor, labels_);
}

StationaryMeasure::StationaryMeasure(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw std::invalid_argument("empty measure");
  if (!weights_.allFinite() || (weights_.array() <= 0.0).any())
    throw std::invalid_argument("measure must have full support");
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw std::invalid_argument("measure must sum to one");
}

MuFunction::MuFunction(Vector values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw std::invalid_argument("function values must be finite");
}

MuFunction::MuFunction(Matrix values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw std::invalid_argument("function values must be finite");
}

Eigen::RowVectorXd MuFunction::mean(const StationaryMeasure& mu) const {
  if (mu.size() != size()) throw std::invalid_argument("dimension mismatch between measure and function");
  return mu.weights().transpose() * values_;
}

MuFunction MuFunction::centered(const StationaryMeasure& mu) const {
  Matrix c = values_;
  c.rowwise() -= mean(mu);
  return MuFunction(std::move(c));
}

bool MuFunction::is_zero_mean(const StationaryMeasure& mu, double tol) const {
  const double scale = std::max(1.0, max_abs(values_));
  return mean(mu).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_irreducible(const Matrix& rates) {
  if (rates.rows() <= 1) return true;
  const auto fwd = reachable(rates, true);
  const auto bwd = reachable(rates, false);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

StationaryMeasure stationary_measure(const FiniteGenerator& gen) {
  const Eigen::Index n = gen.size();
  // Bordered system: A^T mu = 0 with the last balance equation replaced by sum(mu) = 1.
  Matrix sys = gen.rates().transpose();
  sys.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Matrix> lu(sys);
  if (!lu.isInvertible()) throw std::invalid_argument("no unique ergodic measure");
  Vector mu = lu.solve(rhs);
  // one step of iterative refinement
  mu += lu.solve(rhs - sys * mu);
  if ((mu.array() <= 0.0).any()) throw std::invalid_argument("no unique ergodic measure");
  mu /= mu.sum();
  return StationaryMeasure(std::move(mu));
}

void require_stationary(const FiniteGenerator& gen, const StationaryMeasure& mu) {
  if (mu.size() != gen.size()) throw std::invalid_argument("dimension mismatch between measure and generator");
  const double scale = std::max(1.0, max_abs(gen.rates()));
  const double residual = (mu.weights().transpose() * gen.rates()).cwiseAbs().maxCoeff();
  if (residual > tolerance::balance * scale)
    throw std::invalid_argument("measure is not stationary for the generator (balance residual " +
                                std::to_string(residual) + ")");
}

double inner(const StationaryMeasure& mu, const Vector& f, const Vector& g) {
  if (f.size() != mu.size() || g.size() != mu.size()) throw std::invalid_argument("dimension mismatch in inner product");
  return (mu.weights().array() * f.array() * g.array()).sum();
}

double inner(const StationaryMeasure& mu, const MuFunction& f, const MuFunction& g) {
  if (f.size() != mu.size() || g.size() != mu.size() || f.dim() != g.dim())
    throw std::invalid_argument("dimension mismatch in inner product");
  return (mu.weights().asDiagonal() * f.values()).cwiseProduct(g.values()).sum();
}

Matrix gram(const StationaryMeasure& mu, const MuFunction& f, const MuFunction& g) {
  if (f.size() != mu.size() || g.size() != mu.size()) throw std::invalid_argument("dimension mismatch in inner product");
  return f.values().transpose() * mu.weights().asDiagonal() * g.values();
}

Matrix adjoint(const FiniteGenerator& gen, const StationaryMeasure& mu) {
  require_stationary(gen, mu);
  const Vector& w = mu.weights();
  return w.cwiseInverse().asDiagonal() * gen.rates().transpose() * w.asDiagonal();
}

FiniteGenerator symmetric_part(const FiniteGenerator& gen, const StationaryMeasure& mu) {
  Matrix sym = 0.5 * (gen.rates() + adjoint(gen, mu));
  return FiniteGenerator::from_jump_rates(std::move(sym), gen.labels());
}

bool is_reversible(const FiniteGenerator& gen, const StationaryMeasure& mu, double tol) {
  if (mu.size() != gen.size()) throw std::invalid_argument("dimension mismatch between measure and generator");
  const Matrix flux = mu.weights().asDiagonal() * gen.rates();
  const double scale = std::max(1.0, max_abs(gen.rates()));
  return (flux - flux.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

MuFunction solve_poisson(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v) {
  const Eigen::Index n = gen.size();
  if (v.size() != n || mu.size() != n) throw std::invalid_argument("dimension mismatch in Poisson equation");
  if (!v.is_zero_mean(mu)) throw std::invalid_argument("no solution: v not in range(A) (nonzero mean)");

  // [ -A  1 ] [w]   [v]
  // [ mu^T 0] [c] = [0]    -- nonsingular for irreducible A; c = E_mu v = 0.
  Matrix sys(n + 1, n + 1);
  sys.topLeftCorner(n, n) = -gen.rates();
  sys.topRightCorner(n, 1).setOnes();
  sys.bottomLeftCorner(1, n) = mu.weights().transpose();
  sys(n, n) = 0.0;
  Matrix rhs = Matrix::Zero(n + 1, v.dim());
  rhs.topRows(n) = v.values();

  Eigen::PartialPivLU<Matrix> lu(sys);
  Matrix sol = lu.solve(rhs);
  sol += lu.solve(rhs - sys * sol);
  Matrix w = sol.topRows(n);
  w.rowwise() -= mu.weights().transpose() * w;
  return MuFunction(std::move(w));
}

Matrix transition_matrix(const FiniteGenerator& gen, const StationaryMeasure& mu, double t) {
  if (t < 0.0) throw std::invalid_argument("transition time must be non-negative");
  if (is_reversible(gen, mu)) {
    const Vector s = mu.weights().cwiseSqrt();
    const Matrix sym = s.asDiagonal() * gen.rates() * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sym + sym.transpose()));
    const Vector e = (t * eig.eigenvalues().array()).exp();
    const Matrix p = eig.eigenvectors() * e.asDiagonal() * eig.eigenvectors().transpose();
    return s.cwiseInverse().asDiagonal() * p * s.asDiagonal();
  }
  const Matrix scaled = t * gen.rates();
  return scaled.exp();
}

SpectralScales spectral_scales(const FiniteGenerator& gen) {
  if (gen.size() == 1) return {std::numeric_limits<double>::infinity(), 0.0};
  Eigen::EigenSolver<Matrix> es(gen.rates(), false);
  const Eigen::VectorXcd z = es.eigenvalues();
  // Drop the eigenvalue closest to zero (the constants).
  Eigen::Index zero_idx = 0;
  z.cwiseAbs().minCoeff(&zero_idx);
  SpectralScales out{std::numeric_limits<double>::infinity(), 0.0};
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    if (k == zero_idx) continue;
    out.gap = std::min(out.gap, -z(k).real());
    out.frequency = std::max(out.frequency, std::abs(z(k).imag()));
  }
  return out;
}

ZeroMeanFrame::ZeroMeanFrame(const StationaryMeasure& mu) : sqrt_mu_(mu.weights().cwiseSqrt()) {
  const Eigen::Index n = mu.size();
  Eigen::HouseholderQR<Matrix> qr{Matrix(sqrt_mu_)};
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  basis_ = q.rightCols(n - 1);
}

Vector ZeroMeanFrame::to_coords(const Vector& f) const {
  return basis_.transpose() * sqrt_mu_.cwiseProduct(f);
}

Vector ZeroMeanFrame::from_coords(const Vector& y) const {
  return (basis_ * y).cwiseQuotient(sqrt_mu_);
}

Matrix ZeroMeanFrame::restrict(const Matrix& op) const {
  return basis_.transpose() * sqrt_mu_.asDiagonal() * op * sqrt_mu_.cwiseInverse().asDiagonal() * basis_;
}

Matrix ZeroMeanFrame::functions() const {
  return sqrt_mu_.cwiseInverse().asDiagonal() * basis_;
}

}  // namespace active
