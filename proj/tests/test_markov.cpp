#include "active/markov.hpp"
#include "active/random_models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace active;
using active::testing::cycle;
using active::testing::flip;
using active::testing::uniformized_exp;
using active::testing::vec;

TEST(FiniteGenerator, RejectsMalformedRates) {
  Matrix bad(2, 2);
  bad << -1.0, 1.0, 1.0, -0.5;  // row sum
  EXPECT_THROW(FiniteGenerator{bad}, std::invalid_argument);
  bad << 1.0, -1.0, 1.0, -1.0;  // negative off-diagonal
  EXPECT_THROW(FiniteGenerator{bad}, std::invalid_argument);
  bad << -1.0, 1.0, std::nan(""), 0.0;
  EXPECT_THROW(FiniteGenerator{bad}, std::invalid_argument);
  EXPECT_THROW(FiniteGenerator{Matrix(2, 3)}, std::invalid_argument);
  EXPECT_THROW(FiniteGenerator(flip().rates(), {"only-one"}), std::invalid_argument);
}

TEST(FiniteGenerator, RejectsReducibleChains) {
  Matrix j = Matrix::Zero(3, 3);
  j(0, 1) = j(1, 0) = 1.0;  // state 2 is cut off
  EXPECT_TRUE(is_irreducible(FiniteGenerator::from_jump_rates(Matrix::Ones(3, 3)).rates()));
  EXPECT_THROW(FiniteGenerator::from_jump_rates(j), std::invalid_argument);
  j(1, 2) = 1.0;  // 2 reachable but absorbing
  EXPECT_THROW(FiniteGenerator::from_jump_rates(j), std::invalid_argument);
  j(2, 0) = 1.0;
  EXPECT_NO_THROW(FiniteGenerator::from_jump_rates(j));
}

TEST(FiniteGenerator, FromJumpRatesRebuildsDiagonal) {
  Matrix j(2, 2);
  j << 7.0, 2.0, 3.0, -4.0;  // diagonal ignored
  const FiniteGenerator g = FiniteGenerator::from_jump_rates(j);
  EXPECT_DOUBLE_EQ(g(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(g(1, 1), -3.0);
  EXPECT_DOUBLE_EQ(g.exit_rate(1), 3.0);
  EXPECT_DOUBLE_EQ(g.scaled(2.0)(0, 1), 4.0);
}

TEST(StationaryMeasure, TwoStateClosedForm) {
  Matrix j(2, 2);
  j << 0.0, 2.0, 3.0, 0.0;
  const StationaryMeasure mu = stationary_measure(FiniteGenerator::from_jump_rates(j));
  EXPECT_NEAR(mu[0], 0.6, 1e-14);
  EXPECT_NEAR(mu[1], 0.4, 1e-14);
}

TEST(StationaryMeasure, MatchesLongTimeTransitionRows) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteGenerator g = random_generator(rng, 3 + trial % 5, trial % 2 == 0);
    const StationaryMeasure mu = stationary_measure(g);
    // e^{60 A} by squaring a short-time uniformized step, which avoids underflow of e^{-q t}
    Matrix p = uniformized_exp(g.rates(), 60.0 / 64.0);
    for (int k = 0; k < 6; ++k) p = p * p;
    for (Eigen::Index i = 0; i < g.size(); ++i) EXPECT_LT((p.row(i).transpose() - mu.weights()).norm(), 1e-9);
    EXPECT_LT((mu.weights().transpose() * g.rates()).norm(), 1e-12);
  }
}

TEST(StationaryMeasure, ValidatesSuppliedMeasure) {
  EXPECT_THROW(StationaryMeasure(vec({0.5, 0.6})), std::invalid_argument);
  EXPECT_THROW(StationaryMeasure(vec({1.0, 0.0})), std::invalid_argument);
  EXPECT_THROW(require_stationary(cycle(0.2), StationaryMeasure(vec({0.5, 0.25, 0.25}))), std::invalid_argument);
  EXPECT_NO_THROW(require_stationary(cycle(0.2), StationaryMeasure(Vector::Constant(3, 1.0 / 3))));
}

TEST(MuFunction, CenteringAndMeans) {
  const StationaryMeasure mu(vec({0.25, 0.75}));
  const MuFunction f(vec({1.0, 3.0}));
  EXPECT_DOUBLE_EQ(f.mean(mu)(0), 2.5);
  EXPECT_FALSE(f.is_zero_mean(mu));
  EXPECT_TRUE(f.centered(mu).is_zero_mean(mu));
  EXPECT_THROW(f.mean(StationaryMeasure(Vector::Constant(3, 1.0 / 3))), std::invalid_argument);
}

TEST(InnerProducts, GramIsSymmetricPositive) {
  std::mt19937_64 rng(3);
  const RandomChain c = random_chain(rng, 5, 3, false);
  const Matrix g = gram(c.measure, c.speed, c.speed);
  EXPECT_LT((g - g.transpose()).norm(), 1e-14);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff(), -1e-14);
  EXPECT_NEAR(g(1, 2), inner(c.measure, c.speed.column(1), c.speed.column(2)), 1e-15);
}

TEST(Adjoint, SatisfiesDefiningIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomChain c = random_chain(rng, 6, 1, false);
    const Matrix star = adjoint(c.generator, c.measure);
    const Vector f = Vector::Random(6), g = Vector::Random(6);
    EXPECT_NEAR(inner(c.measure, f, c.generator.rates() * g), inner(c.measure, star * f, g), 1e-12);
    // the adjoint of a generator with respect to its own stationary law is a generator
    EXPECT_LT(star.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reversibility, CycleIsReversibleOnlyWithoutRotation) {
  const StationaryMeasure mu(Vector::Constant(3, 1.0 / 3));
  EXPECT_TRUE(is_reversible(cycle(0.0), mu));
  EXPECT_FALSE(is_reversible(cycle(0.3), mu));
  EXPECT_FALSE(is_reversible(cycle(-0.5), mu));
  const FiniteGenerator s = symmetric_part(cycle(0.3), mu);
  EXPECT_TRUE(is_reversible(s, mu));
  EXPECT_LT((s.rates() - cycle(0.0).rates()).norm(), 1e-15);
}

TEST(Reversibility, RandomReversibleChainsKeepTheirMeasure) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomChain c = random_chain(rng, 2 + trial % 7, 1, true);
    EXPECT_TRUE(is_reversible(c.generator, c.measure));
    const FiniteGenerator s = symmetric_part(c.generator, c.measure);
    EXPECT_LT((s.rates() - c.generator.rates()).norm(), 1e-12);
  }
}

TEST(Poisson, AgreesWithLeastSquaresSolve) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomChain c = random_chain(rng, 3 + trial % 6, 2, trial % 3 == 0);
    const MuFunction w = solve_poisson(c.generator, c.measure, c.speed);
    EXPECT_TRUE(w.is_zero_mean(c.measure));
    // independent route: minimum-norm least squares, then recentre
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(-c.generator.rates());
    const MuFunction ref = MuFunction(Matrix(cod.solve(c.speed.values()))).centered(c.measure);
    EXPECT_LT((w.values() - ref.values()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((-c.generator.rates() * w.values() - c.speed.values()).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(Poisson, RejectsNonCenteredRightHandSide) {
  const StationaryMeasure mu(vec({0.5, 0.5}));
  EXPECT_THROW(solve_poisson(flip(), mu, MuFunction(vec({1.0, 0.0}))), std::invalid_argument);
}

TEST(TransitionMatrix, MatchesUniformization) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteGenerator g = random_generator(rng, 4 + trial % 4, trial % 2 == 1);
    const StationaryMeasure mu = stationary_measure(g);
    for (double t : {0.0, 0.05, 0.7, 3.0}) {
      const Matrix p = transition_matrix(g, mu, t);
      EXPECT_LT((p - uniformized_exp(g.rates(), t)).cwiseAbs().maxCoeff(), 1e-11) << "t=" << t;
      EXPECT_LT((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_THROW(transition_matrix(flip(), StationaryMeasure(vec({0.5, 0.5})), -1.0), std::invalid_argument);
}

TEST(SpectralScales, KnownChains) {
  EXPECT_NEAR(spectral_scales(flip(1.5)).gap, 3.0, 1e-12);
  // cycle(a): eigenvalues -3/2 +- i sqrt(3) a
  const SpectralScales s = spectral_scales(cycle(0.5));
  EXPECT_NEAR(s.gap, 1.5, 1e-12);
  EXPECT_NEAR(s.frequency, std::sqrt(3.0) * 0.5, 1e-12);
}

TEST(ZeroMeanFrame, IsAnIsometryOnMeanZeroFunctions) {
  std::mt19937_64 rng(31);
  const RandomChain c = random_chain(rng, 6, 1, false);
  const ZeroMeanFrame frame(c.measure);
  EXPECT_EQ(frame.dim(), 5);
  const Matrix f = frame.functions();
  EXPECT_LT((gram(c.measure, MuFunction(f), MuFunction(f)) - Matrix::Identity(5, 5)).norm(), 1e-12);
  const Vector v = c.speed.column(0);
  const Vector y = frame.to_coords(v);
  EXPECT_NEAR(y.squaredNorm(), inner(c.measure, v, v), 1e-13);
  EXPECT_LT((frame.from_coords(y) - v).norm(), 1e-13);
}

TEST(ZeroMeanFrame, RestrictedReversibleGeneratorIsSymmetric) {
  std::mt19937_64 rng(37);
  const RandomChain c = random_chain(rng, 5, 1, true);
  const Matrix r = ZeroMeanFrame(c.measure).restrict(c.generator.rates());
  EXPECT_LT((r - r.transpose()).norm(), 1e-12);
  EXPECT_LT(Eigen::SelfAdjointEigenSolver<Matrix>(r).eigenvalues().maxCoeff(), 0.0);
}
