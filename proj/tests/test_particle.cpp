#include "active/diffusion.hpp"
#include "active/particle.hpp"
#include "active/random_models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <set>

using namespace active;
using active::testing::cycle;
using active::testing::flip;
using active::testing::vec;

namespace {

ParticleParams params(double kappa, double lambda, double gamma, int dim = 1, Variant v = Variant::lattice) {
  ParticleParams p;
  p.kappa = kappa;
  p.lambda = lambda;
  p.gamma = gamma;
  p.dim = dim;
  p.variant = v;
  return p;
}

SimulationOptions threads(unsigned n, bool parts = true) {
  SimulationOptions o;
  o.threads = n;
  o.track_parts = parts;
  return o;
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(params(0.0, 0.0, 1.0).validate());
  EXPECT_THROW(params(-1.0, 1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, -1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, 1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, 1.0, 1.0, 0).validate(), std::invalid_argument);
  EXPECT_EQ(parse_variant("continuum"), Variant::continuum);
  EXPECT_THROW(parse_variant("ballistic"), std::invalid_argument);
}

TEST(Simulate, RejectsBadInputs) {
  const StateProcessModel m = FiniteChain(flip(), vec({1.0, -1.0}));
  EXPECT_THROW(simulate(m, params(1, 1, 1), 0.0, 1), std::invalid_argument);
  EXPECT_THROW(simulate(m, params(1, 1, 1, 2), 1.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_endpoints(m, params(1, 1, 1), 1.0, 1, 1), std::invalid_argument);
}

TEST(Seeds, ReplicaSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(replica_seed(42, i));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_EQ(replica_seed(42, 7), replica_seed(42, 7));
  EXPECT_NE(replica_seed(42, 7), replica_seed(43, 7));
}

TEST(Simulate, SameSeedSameTrajectory) {
  const StateProcessModel m = OrnsteinUhlenbeck2d(0.5, 1.0);
  const Trajectory a = simulate(m, params(0.3, 1.0, 2.0, 2), 5.0, 99);
  const Trajectory b = simulate(m, params(0.3, 1.0, 2.0, 2), 5.0, 99);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].t, b.points[i].t);
    EXPECT_EQ(a.points[i].x, b.points[i].x);
  }
}

TEST(SampleEndpoints, IndependentOfThreadCount) {
  for (const StateProcessModel& m :
       {StateProcessModel(FiniteChain(cycle(0.2), vec({1.0, 0.0, -1.0}))), StateProcessModel(CircleBrownian(1, 2))}) {
    const EndpointSamples one = sample_endpoints(m, params(0.5, 1.0, 1.5), 3.0, 257, 5, threads(1));
    const EndpointSamples four = sample_endpoints(m, params(0.5, 1.0, 1.5), 3.0, 257, 5, threads(4));
    EXPECT_EQ(one.x, four.x);
    EXPECT_EQ(one.active, four.active);
  }
}

TEST(Trajectory, PartsAddUpAndTimesAreOrdered) {
  std::mt19937_64 rng(1);
  const RandomChain c = random_chain(rng, 4, 2, false);
  for (Variant v : {Variant::lattice, Variant::continuum}) {
    const Trajectory t = simulate(FiniteChain(c.generator, c.speed), params(0.7, 1.3, 0.8, 2, v), 20.0, 3);
    ASSERT_TRUE(t.has_parts);
    EXPECT_EQ(t.points.front().kind, EventKind::start);
    EXPECT_EQ(t.points.back().kind, EventKind::end);
    EXPECT_DOUBLE_EQ(t.points.back().t, 20.0);
    double last = 0.0;
    for (const auto& p : t.points) {
      EXPECT_GE(p.t, last);
      last = p.t;
      EXPECT_LT((p.x - p.walk - p.martingale - p.active).norm(), 1e-12);
      if (v == Variant::continuum) EXPECT_EQ(p.martingale.norm(), 0.0);
    }
  }
}

TEST(Trajectory, LatticePositionsAreIntegerWithIntegerSpeeds) {
  const Trajectory t = simulate(FiniteChain(cycle(0.4), vec({2.0, 0.0, -2.0})), params(1.0, 2.0, 1.0), 30.0, 8);
  for (const auto& p : t.points) EXPECT_EQ(p.x(0), std::round(p.x(0)));
}

TEST(Trajectory, NoMotionWithoutRates) {
  const Trajectory t = simulate(FiniteChain(flip(), vec({1.0, -1.0})), params(0.0, 0.0, 1.0), 10.0, 2);
  EXPECT_EQ(t.final().x(0), 0.0);
  EXPECT_EQ(t.quadratic_variation, 0.0);
}

TEST(Trajectory, QuadraticVariationCheckNeedsParts) {
  const Trajectory t = simulate(OrnsteinUhlenbeck1d(1, 1), params(1, 1, 1), 2.0, 2, threads(1, false));
  EXPECT_FALSE(t.has_parts);
  EXPECT_THROW(quadratic_variation_check(t), std::invalid_argument);
}

TEST(Jackknife, MatchesClassicalFormulas) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  Vector a(50), b(50);
  for (int i = 0; i < 50; ++i) {
    a(i) = n(rng);
    b(i) = 0.5 * a(i) + n(rng);
  }
  const Estimate m = jackknife_mean(a);
  const double mean = a.mean();
  const double sd = std::sqrt((a.array() - mean).square().sum() / 49.0);
  EXPECT_NEAR(m.value, mean, 1e-14);
  EXPECT_NEAR(m.se, sd / std::sqrt(50.0), 1e-12);
  const Estimate c = jackknife_covariance(a, b);
  const double cov = ((a.array() - mean) * (b.array() - b.mean())).sum() / 49.0;
  EXPECT_NEAR(c.value, cov, 1e-12);
  // brute-force leave-one-out
  double acc = 0.0, acc2 = 0.0;
  for (int k = 0; k < 50; ++k) {
    Vector a2(49), b2(49);
    for (int i = 0, j = 0; i < 50; ++i)
      if (i != k) {
        a2(j) = a(i);
        b2(j++) = b(i);
      }
    const double ck = ((a2.array() - a2.mean()) * (b2.array() - b2.mean())).sum() / 48.0;
    acc += ck;
    acc2 += ck * ck;
  }
  const double mbar = acc / 50.0;
  EXPECT_NEAR(c.se, std::sqrt(49.0 / 50.0 * (acc2 - 50.0 * mbar * mbar)), 1e-10);
  EXPECT_THROW(jackknife_covariance(a.head(2), b.head(2)), std::invalid_argument);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1001);
  parallel_for(1001, 3, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 2, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

// Monte Carlo against the exact finite-horizon covariance at 4 standard errors.
TEST(Moments, FiniteChainMatchesExactFiniteHorizonVariance) {
  std::mt19937_64 rng(6);
  const RandomChain c = random_chain(rng, 4, 2, false);
  const StateProcessModel m = FiniteChain(c.generator, c.speed);
  for (Variant v : {Variant::lattice, Variant::continuum}) {
    const ParticleParams p = params(0.4, 1.5, 1.2, 2, v);
    const double T = 6.0;
    const MomentEstimate est = estimate_moments(m, p, T, 20000, 77);
    const Matrix exact = finite_horizon_covariance_rate(m, p, T);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        EXPECT_NEAR(est.covariance[i][j].value / T, exact(i, j), 4.0 * est.covariance[i][j].se / T)
            << variant_name(v) << " " << i << j;
    EXPECT_NEAR(est.walk[0][0].value / T, 2 * p.kappa, 4.0 * est.walk[0][0].se / T);
  }
}

TEST(Moments, DiffusiveModelsMatchExactFiniteHorizonVariance) {
  for (const StateProcessModel& m : {StateProcessModel(OrnsteinUhlenbeck1d(2.0, 1.0)),
                                     StateProcessModel(CircleBrownian(0.5, 2.0))}) {
    const ParticleParams p = params(0.2, 1.0, 1.0);
    const double T = 4.0;
    const MomentEstimate est = estimate_moments(m, p, T, 20000, 12, threads(0, false));
    const Matrix exact = finite_horizon_covariance_rate(m, p, T);
    EXPECT_NEAR(est.covariance[0][0].value / T, exact(0, 0), 4.0 * est.covariance[0][0].se / T) << model_name(m);
  }
}

TEST(Moments, SubsteppedPartsMatchExactEndpoints) {
  // With parts tracked the continuum variant integrates v on a grid; compare
  // the active part against the exact finite-horizon active covariance.
  const StateProcessModel m = OrnsteinUhlenbeck1d(1.0, 1.0);
  const ParticleParams p = params(0.0, 1.0, 1.0, 1, Variant::continuum);
  const double T = 3.0;
  const MomentEstimate est = estimate_moments(m, p, T, 8000, 21);
  const Matrix exact = finite_horizon_covariance_rate(m, p, T);
  EXPECT_NEAR(est.active[0][0].value / T, exact(0, 0), 4.0 * est.active[0][0].se / T);
}

TEST(Moments, QuadraticVariationMatchesCompensator) {
  const MomentEstimate est =
      estimate_moments(FiniteChain(cycle(0.3), vec({1.0, 0.5, -1.5})), params(0.5, 2.0, 1.0), 10.0, 5000, 3);
  EXPECT_NEAR(est.qv_ratio.value, 1.0, 4.0 * est.qv_ratio.se);
  // lambda E|v|^2 under mu
  EXPECT_NEAR(est.compensator_rate.value, 2.0 * (1.0 + 0.25 + 2.25) / 3.0, 4.0 * est.compensator_rate.se);
}

TEST(Riemann, ConvergesOnAPiecewiseConstantPath) {
  RiemannOptions o;
  o.replicas = 3000;
  o.k_min = 2;
  o.k_max = 8;
  const RiemannReport r =
      riemann_integral_convergence(FiniteChain(cycle(0.5), vec({1.0, 0.0, -1.0})), params(0.0, 2.0, 1.0), 2.0, 4, o);
  ASSERT_EQ(r.rows.size(), 7u);
  EXPECT_LT(r.rows.back().l2_next_n, r.rows.front().l2_next_n);
  EXPECT_LT(r.rows.back().l2_next_drift, r.rows.front().l2_next_drift);
  EXPECT_LT(r.gap_n, 2e-3);
  EXPECT_LT(r.gap_drift, 2e-3);
  EXPECT_THROW(riemann_integral_convergence(OrnsteinUhlenbeck1d(1, 1), params(0, 1, 1), 1.0, 1), std::invalid_argument);
}
