#include "active/state_process.hpp"
#include "active/random_models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace active;
using active::testing::cycle;
using active::testing::uniformized_exp;
using active::testing::vec;

namespace {

/// Within k standard errors of a Bernoulli frequency.
void expect_frequency(double hits, double n, double p, double k = 4.5) {
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(hits / n, p, k * se + 1e-12);
}

}  // namespace

TEST(FiniteChain, InitialLawIsStationary) {
  const FiniteChain chain(cycle(0.3), vec({1.0, 0.0, -1.0}));
  Rng rng(1);
  std::vector<double> counts(3, 0.0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(chain.sample_initial(rng).index)] += 1.0;
  for (int i = 0; i < 3; ++i) expect_frequency(counts[static_cast<std::size_t>(i)], n, 1.0 / 3);
}

TEST(FiniteChain, AdvanceSamplesTheTransitionMatrix) {
  std::mt19937_64 gen_rng(2);
  const RandomChain rc = random_chain(gen_rng, 4, 1, false);
  const FiniteChain chain(rc.generator, rc.speed);
  const double dt = 0.4;
  const Matrix p = uniformized_exp(rc.generator.rates(), dt);
  Rng rng(3);
  const int n = 40000;
  for (Eigen::Index start = 0; start < 4; ++start) {
    std::vector<double> counts(4, 0.0);
    for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(chain.advance({start}, dt, rng).index)] += 1.0;
    for (Eigen::Index j = 0; j < 4; ++j) expect_frequency(counts[static_cast<std::size_t>(j)], n, p(start, j));
  }
}

TEST(FiniteChain, StationaryCovariance) {
  const FiniteChain chain(active::testing::flip(2.0), vec({1.0, -1.0}));
  for (double lag : {0.0, 0.1, 1.0}) EXPECT_NEAR(chain.stationary_covariance(lag)(0, 0), std::exp(-4.0 * lag), 1e-13);
  EXPECT_THROW(chain.stationary_covariance(-1.0), std::invalid_argument);
  Rng rng(1);
  EXPECT_THROW(chain.advance({0}, 0.0, rng), std::invalid_argument);
  // non-centered speed: covariance, not second moment
  const FiniteChain shifted(active::testing::flip(2.0), vec({3.0, 1.0}));
  EXPECT_NEAR(shifted.stationary_covariance(0.0)(0, 0), 1.0, 1e-13);
  EXPECT_NEAR(shifted.speed_mean()(0), 2.0, 1e-14);
}

TEST(FiniteChain, RejectsMismatchedSpeed) {
  EXPECT_THROW(FiniteChain(cycle(0.0), vec({1.0, -1.0})), std::invalid_argument);
}

TEST(OrnsteinUhlenbeck1d, ExactTransitionMoments) {
  const OrnsteinUhlenbeck1d ou(2.0, 1.5);
  Rng rng(4);
  const double x0 = 1.3, dt = 0.25;
  const int n = 80000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = ou.advance({x0}, dt, rng).x;
    s += x;
    s2 += x * x;
  }
  const double mean = x0 * std::exp(-2.0 * dt);
  const double var = 1.5 * 1.5 / 4.0 * (1.0 - std::exp(-4.0 * dt));
  EXPECT_NEAR(s / n, mean, 4.5 * std::sqrt(var / n));
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), var, 4.5 * var * std::sqrt(2.0 / n));
  EXPECT_NEAR(ou.stationary_covariance(0.5)(0, 0), 1.5 * 1.5 / 4.0 * std::exp(-1.0), 1e-14);
  EXPECT_THROW(OrnsteinUhlenbeck1d(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(OrnsteinUhlenbeck1d(1.0, -1.0), std::invalid_argument);
}

TEST(OrnsteinUhlenbeck2d, LaggedCovarianceBySampling) {
  const OrnsteinUhlenbeck2d ou(1.5, 1.0);
  Rng rng(5);
  const double lag = 0.6;
  const int n = 60000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const auto s0 = ou.sample_initial(rng);
    const auto s1 = ou.advance(s0, lag, rng);
    acc += s0.x * s1.x.transpose();
  }
  acc /= n;
  // convention: C(lag)_ij = E[v_i(0) v_j(lag)]
  const Matrix c = ou.stationary_covariance(lag);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(acc(i, j), c(i, j), 0.012) << i << "," << j;
  EXPECT_LT((ou.stationary_covariance(0.0) - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(CircleBrownian, LaggedCovarianceBySampling) {
  const CircleBrownian c(0.7, 1.3);
  Rng rng(6);
  const int n = 60000;
  for (double lag : {0.3, 1.0}) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto s0 = c.sample_initial(rng);
      acc += std::sin(s0.theta) * std::sin(c.advance(s0, lag, rng).theta);
    }
    EXPECT_NEAR(acc / n, 0.5 * std::exp(-0.7 * lag) * std::cos(1.3 * lag), 0.01);
  }
  EXPECT_THROW(CircleBrownian(0.0, 1.0), std::invalid_argument);
}

TEST(CircleBrownian, AngleStaysOnTheCircle) {
  const CircleBrownian c(5.0, 3.0);
  Rng rng(7);
  auto s = c.sample_initial(rng);
  for (int i = 0; i < 1000; ++i) {
    s = c.advance(s, 0.5, rng);
    EXPECT_GE(s.theta, 0.0);
    EXPECT_LT(s.theta, 2.0 * std::numbers::pi);
  }
}

TEST(StateProcessModel, VariantDispatch) {
  const StateProcessModel a = OrnsteinUhlenbeck2d(1.0, 2.0);
  const StateProcessModel b = FiniteChain(cycle(0.1), Matrix(Matrix::Identity(3, 2)));
  EXPECT_EQ(speed_dim(a), 2);
  EXPECT_EQ(speed_dim(b), 2);
  EXPECT_STREQ(model_name(a), "ou2d");
  EXPECT_STREQ(model_name(b), "finite");
  EXPECT_STREQ(model_name(StateProcessModel(CircleBrownian(1, 0))), "circle");
  EXPECT_DOUBLE_EQ(covariance_decay_rate(a), 1.0);
  EXPECT_DOUBLE_EQ(covariance_frequency(a), 1.0);
  Rng rng(8);
  const AnyState s = sample_initial(b, rng);
  EXPECT_EQ(speed(b, s).size(), 2);
  EXPECT_EQ(speed(b, advance(b, s, 0.1, rng)).size(), 2);
  EXPECT_NEAR(speed_mean(b)(0), 1.0 / 3, 1e-14);
}
