#include "active/reversibility.hpp"
#include "active/random_models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace active;
using active::testing::cycle;
using active::testing::vec;

namespace {

/// A_ij = F_ij / mu_i for a symmetric flow matrix F (zero diagonal).
FiniteGenerator from_flows(const Matrix& flows, const Vector& mu) {
  Matrix j = flows;
  for (Eigen::Index i = 0; i < j.rows(); ++i) j.row(i) /= mu(i);
  return FiniteGenerator::from_jump_rates(j);
}

Matrix random_skew(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return scale * (m - m.transpose());
}

}  // namespace

TEST(Compare, GapIsPositiveSemidefiniteAndVanishesForReversibleChains) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const bool rev = trial % 3 == 0;
    const RandomChain c = random_chain(rng, 3 + trial % 5, 1 + trial % 3, rev);
    const ComparisonReport r = compare_to_reversible(c.generator, c.measure, c.speed);
    EXPECT_TRUE(r.dominated);
    EXPECT_GE(r.min_gap_eigenvalue, -kDominanceSlack);
    EXPECT_EQ(r.reversible, rev);
    if (rev) EXPECT_LT(r.max_gap_magnitude, 1e-10);
    else EXPECT_GT(r.max_gap_magnitude, 1e-10);
    EXPECT_LT((r.gap - (r.active_symmetric - r.active)).norm(), 1e-14);
  }
}

TEST(Compare, CycleValues) {
  const StationaryMeasure mu(Vector::Constant(3, 1.0 / 3));
  const ComparisonReport r = compare_to_reversible(cycle(0.5), mu, vec({1.0, 0.0, -1.0}));
  EXPECT_NEAR(r.active(0, 0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.active_symmetric(0, 0), 4.0 / 9.0, 1e-12);
  EXPECT_NEAR(poisson_form(cycle(0.0), mu, vec({1.0, 0.0, -1.0}))(0, 0), 4.0 / 9.0, 1e-12);
}

TEST(SkewIdentity, HoldsForSmallAndLargeSkewMatrices) {
  std::mt19937_64 rng(2);
  for (double scale : {0.05, 0.5, 5.0}) {
    const Matrix c = random_skew(rng, 5, scale);
    const Vector w = Vector::Random(5);
    const SkewIdentity s = skew_symmetric_identity(c, w);
    EXPECT_NEAR(s.lhs, s.mid, 1e-12 * std::max(1.0, s.rhs));
    EXPECT_LE(s.mid, s.rhs + 1e-12);
    EXPECT_NEAR(s.rhs, w.squaredNorm(), 1e-14);
  }
  Matrix not_skew = Matrix::Identity(3, 3);
  EXPECT_THROW(skew_symmetric_identity(not_skew, Vector::Ones(3)), std::invalid_argument);
}

TEST(TaylorCheck, DecomposesTheFormAgainstItsReversiblePart) {
  std::mt19937_64 rng(3);
  int convergent = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const RandomChain c = random_chain(rng, 3 + trial % 5, 1, false);
    const Vector v = c.speed.column(0);
    const TaylorCheck t = taylor_check(c.generator, c.measure, v);
    EXPECT_NEAR(t.form, poisson_form(c.generator, c.measure, v)(0, 0), 1e-10);
    EXPECT_NEAR(t.form, t.symmetric_form + t.correction, 1e-10 * std::max(1.0, t.symmetric_form));
    EXPECT_LE(t.correction, 1e-14);
    EXPECT_EQ(t.series_converges, t.c_norm < 1.0);
    convergent += t.series_converges ? 1 : 0;
  }
  EXPECT_GT(convergent, 0);
}

TEST(Distinctness, DifferentReversibleGeneratorsGiveDifferentForms) {
  const Vector mu = vec({0.1, 0.2, 0.3, 0.4});
  Matrix f = Matrix::Zero(4, 4);
  f(0, 1) = f(1, 0) = 0.05;
  f(1, 2) = f(2, 1) = 0.1;
  f(2, 3) = f(3, 2) = 0.07;
  f(0, 3) = f(3, 0) = 0.02;
  Matrix g = f;
  g(0, 2) = g(2, 0) = 0.04;
  const FiniteGenerator a = from_flows(f, mu), b = from_flows(g, mu);
  const StationaryMeasure m(mu);
  const DistinctnessResult r = reversible_distinctness(a, b, m);
  EXPECT_FALSE(r.equal);
  EXPECT_GT(std::abs(r.form_a - r.form_b), 1e-10);
  EXPECT_NEAR(poisson_form(a, m, r.witness)(0, 0), r.form_a, 1e-12);
  EXPECT_NEAR(poisson_form(b, m, r.witness)(0, 0), r.form_b, 1e-12);
  EXPECT_TRUE(reversible_distinctness(a, a, m).equal);
  EXPECT_THROW(reversible_distinctness(cycle(0.3), cycle(0.0), StationaryMeasure(Vector::Constant(3, 1.0 / 3))),
               std::invalid_argument);
}

TEST(NoDominance, EqualDiagonalPairsOnFourStates) {
  // perturb the flows by +-eps around the cycle 0-1-2-3-0; every row sum is kept
  const Vector mu = vec({0.25, 0.25, 0.25, 0.25});
  Matrix f = Matrix::Constant(4, 4, 0.1);
  f.diagonal().setZero();
  Matrix g = f;
  const double eps = 0.04;
  g(0, 1) = g(1, 0) = 0.1 + eps;
  g(1, 2) = g(2, 1) = 0.1 - eps;
  g(2, 3) = g(3, 2) = 0.1 + eps;
  g(3, 0) = g(0, 3) = 0.1 - eps;
  const FiniteGenerator a = from_flows(f, mu), b = from_flows(g, mu);
  EXPECT_LT((a.rates().diagonal() - b.rates().diagonal()).norm(), 1e-15);
  const StationaryMeasure m(mu);
  const NoDominanceResult r = no_dominant_reversible(a, b, m);
  EXPECT_FALSE(r.equal);
  ASSERT_TRUE(r.found);
  EXPECT_GT(r.v_a, r.v_b);
  EXPECT_LT(r.w_a, r.w_b);
  EXPECT_NEAR(poisson_form(a, m, r.v)(0, 0), r.v_a, 1e-12);
  EXPECT_NEAR(poisson_form(b, m, r.w)(0, 0), r.w_b, 1e-12);
}

TEST(NoDominance, ThreeStatePairsWithEqualDiagonalsCoincide) {
  // on three states the flows are fixed by the row sums, so no distinct pair exists
  const Vector mu = vec({0.2, 0.3, 0.5});
  Matrix f = Matrix::Zero(3, 3);
  f(0, 1) = f(1, 0) = 0.05;
  f(1, 2) = f(2, 1) = 0.08;
  f(0, 2) = f(2, 0) = 0.03;
  const FiniteGenerator a = from_flows(f, mu);
  EXPECT_TRUE(no_dominant_reversible(a, a, StationaryMeasure(mu)).equal);
}

TEST(NoDominance, RejectsInvalidPairs) {
  const StationaryMeasure mu(Vector::Constant(3, 1.0 / 3));
  EXPECT_THROW(no_dominant_reversible(cycle(0.2), cycle(0.0), mu), std::invalid_argument);
  Matrix f = Matrix::Constant(3, 3, 0.1);
  f.diagonal().setZero();
  Matrix g = f;
  g(0, 1) = g(1, 0) = 0.3;
  EXPECT_THROW(no_dominant_reversible(from_flows(f, mu.weights()), from_flows(g, mu.weights()), mu),
               std::invalid_argument);
}
