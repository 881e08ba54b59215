#include "active/reversibility.hpp"

#include <cmath>

namespace active {
namespace {

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void require_reversible(const FiniteGenerator& g, const StationaryMeasure& mu, const char* name) {
  require_stationary(g, mu);
  if (!is_reversible(g, mu)) throw std::invalid_argument(std::string(name) + " is not reversible with respect to mu");
}

/// Inverse of -A restricted to mean-zero functions, in orthonormal coordinates.
Matrix inverse_form(const ZeroMeanFrame& frame, const FiniteGenerator& g) {
  const Matrix neg = -frame.restrict(g.rates());
  Matrix inv = neg.partialPivLu().inverse();
  return 0.5 * (inv + inv.transpose());
}

double quad(const FiniteGenerator& g, const StationaryMeasure& mu, const Vector& f) {
  return inner(mu, f, solve_poisson(g, mu, MuFunction(f)).column(0));
}

Matrix symmetric_sqrt_inverse(const Matrix& spd) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(spd);
  if (eig.eigenvalues().minCoeff() <= 0.0) throw NumericalError("-sym(A) is not positive definite on mean-zero functions");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

Matrix poisson_form(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v) {
  const MuFunction w = solve_poisson(gen, mu, v);
  const Matrix g = gram(mu, v, w);
  return 0.5 * (g + g.transpose());
}

ComparisonReport compare_to_reversible(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v) {
  ComparisonReport r;
  const FiniteGenerator sym = symmetric_part(gen, mu);
  r.generator = gen.rates();
  r.symmetric = sym.rates();
  r.active = poisson_form(gen, mu, v);
  r.active_symmetric = poisson_form(sym, mu, v);
  r.gap = r.active_symmetric - r.active;
  r.gap = 0.5 * (r.gap + r.gap.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(r.gap, Eigen::EigenvaluesOnly);
  r.min_gap_eigenvalue = eig.eigenvalues().minCoeff();
  r.max_gap_magnitude = eig.eigenvalues().cwiseAbs().maxCoeff();
  r.reversible = is_reversible(gen, mu);
  r.dominated = r.min_gap_eigenvalue >= -kDominanceSlack;
  return r;
}

SkewIdentity skew_symmetric_identity(const Matrix& C, const Vector& w) {
  const Eigen::Index n = C.rows();
  if (C.cols() != n || w.size() != n) throw std::invalid_argument("dimension mismatch");
  if ((C + C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(C))
    throw std::invalid_argument("C is not skew-symmetric");
  const Matrix I = Matrix::Identity(n, n);
  Eigen::PartialPivLU<Matrix> plus(I + C);
  if (std::abs(plus.determinant()) < 1e-300) throw NumericalError("I + C is singular");
  SkewIdentity s;
  s.lhs = w.dot(plus.solve(w));
  s.mid = w.dot((I - C * C).ldlt().solve(w));
  s.rhs = w.squaredNorm();
  return s;
}

TaylorCheck taylor_check(const FiniteGenerator& gen, const StationaryMeasure& mu, const Vector& v) {
  require_stationary(gen, mu);
  if (v.size() != gen.size()) throw std::invalid_argument("dimension mismatch");
  const ZeroMeanFrame frame(mu);
  const Matrix adj = adjoint(gen, mu);
  const Matrix b = -frame.restrict(0.5 * (gen.rates() + adj));
  const Matrix dm = frame.restrict(0.5 * (gen.rates() - adj));
  const Matrix bsym = 0.5 * (b + b.transpose());
  const Matrix b_inv_half = symmetric_sqrt_inverse(bsym);
  Matrix c = b_inv_half * dm * b_inv_half;
  c = 0.5 * (c - c.transpose());
  const Vector y = frame.to_coords(MuFunction(v).centered(mu).column(0));
  const Vector w = b_inv_half * y;
  const Eigen::Index k = c.rows();
  const Matrix c2 = c * c;
  TaylorCheck t;
  t.form = quad(gen, mu, v);
  t.symmetric_form = w.squaredNorm();
  t.correction = w.dot(c2 * (Matrix::Identity(k, k) - c2).ldlt().solve(w));
  t.c_norm = k == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(c).singularValues()(0);
  t.series_converges = t.c_norm < 1.0;
  return t;
}

DistinctnessResult reversible_distinctness(const FiniteGenerator& a, const FiniteGenerator& b,
                                           const StationaryMeasure& mu) {
  require_reversible(a, mu, "A");
  require_reversible(b, mu, "B");
  if (a.size() != b.size()) throw std::invalid_argument("generators differ in size");
  const ZeroMeanFrame frame(mu);
  const Matrix basis = frame.functions();
  const Eigen::Index k = basis.cols();
  DistinctnessResult r;
  auto probe = [&](const Vector& f) {
    ++r.probes;
    const double qa = quad(a, mu, f), qb = quad(b, mu, f);
    if (std::abs(qa - qb) > 1e-10 * std::max({1.0, std::abs(qa), std::abs(qb)})) {
      r.witness = f;
      r.form_a = qa;
      r.form_b = qb;
      return true;
    }
    return false;
  };
  for (Eigen::Index i = 0; i < k; ++i)
    if (probe(basis.col(i))) return r;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (probe(basis.col(i) + basis.col(j))) return r;
  // all polarization probes agree, so the inverse forms (and hence A, B) coincide
  const double diff = (a.rates() - b.rates()).cwiseAbs().maxCoeff();
  if (diff > 1e-8 * std::max(scale_of(a.rates()), scale_of(b.rates())))
    throw NumericalError("quadratic forms agree but generators differ by " + std::to_string(diff));
  r.equal = true;
  return r;
}

NoDominanceResult no_dominant_reversible(const FiniteGenerator& a, const FiniteGenerator& b,
                                         const StationaryMeasure& mu) {
  require_reversible(a, mu, "A");
  require_reversible(b, mu, "B");
  if (a.size() != b.size()) throw std::invalid_argument("generators differ in size");
  const double scale = std::max(scale_of(a.rates()), scale_of(b.rates()));
  if ((a.rates().diagonal() - b.rates().diagonal()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("generators must have equal total jump rates from each state");

  NoDominanceResult r;
  const ZeroMeanFrame frame(mu);
  if (frame.dim() == 0 || (a.rates() - b.rates()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    r.equal = true;
    return r;
  }
  const Matrix diff = inverse_form(frame, a) - inverse_form(frame, b);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(diff);
  const Eigen::Index k = diff.rows();
  const double top = eig.eigenvalues()(k - 1), bottom = eig.eigenvalues()(0);
  const double tol = 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (!(top > tol && bottom < -tol)) return r;
  r.found = true;
  r.v = frame.from_coords(eig.eigenvectors().col(k - 1));
  r.w = frame.from_coords(eig.eigenvectors().col(0));
  r.v_a = quad(a, mu, r.v);
  r.v_b = quad(b, mu, r.v);
  r.w_a = quad(a, mu, r.w);
  r.w_b = quad(b, mu, r.w);
  return r;
}

}  // namespace active
