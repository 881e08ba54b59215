#pragma once

// Internal-state processes M_t with exact transition sampling and closed-form
// stationary covariance of the speed v(M_t).

#include "active/markov.hpp"

#include <cstdint>
#include <random>
#include <variant>

namespace active {

using Rng = std::mt19937_64;

struct ChainState {
  Eigen::Index index = 0;
};
struct OuState {
  double x = 0.0;
};
struct PlaneState {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
};
struct AngleState {
  double theta = 0.0;
};

/// Finite chain with speed function v (n x d).
class FiniteChain {
 public:
  using State = ChainState;

  FiniteChain(FiniteGenerator generator, MuFunction speed);

  const FiniteGenerator& generator() const { return generator_; }
  const StationaryMeasure& measure() const { return mu_; }
  const MuFunction& speed_function() const { return speed_; }

  Eigen::Index dim() const { return speed_.dim(); }
  State sample_initial(Rng& rng) const;
  State advance(const State& s, double dt, Rng& rng) const;
  /// Holding time in state s (model time units).
  double sample_holding(const State& s, Rng& rng) const;
  State sample_jump(const State& s, Rng& rng) const;
  void speed(const State& s, Eigen::Ref<Vector> out) const { out = speed_.values().row(s.index).transpose(); }

  Vector speed_mean() const { return speed_.mean(mu_).transpose(); }
  Matrix stationary_covariance(double lag) const;
  double decay_rate() const { return scales_.gap; }
  double frequency() const { return scales_.frequency; }

 private:
  FiniteGenerator generator_;
  StationaryMeasure mu_;
  MuFunction speed_;
  SpectralScales scales_;
  // cumulative jump probabilities per state (targets in jump_targets_)
  std::vector<std::vector<double>> jump_cdf_;
  std::vector<std::vector<Eigen::Index>> jump_targets_;
  std::vector<double> initial_cdf_;
};

/// dM = -theta M dt + sigma dB, v(x) = x.
class OrnsteinUhlenbeck1d {
 public:
  using State = OuState;

  OrnsteinUhlenbeck1d(double theta, double sigma);
  double theta() const { return theta_; }
  double sigma() const { return sigma_; }

  Eigen::Index dim() const { return 1; }
  State sample_initial(Rng& rng) const;
  State advance(const State& s, double dt, Rng& rng) const;
  void speed(const State& s, Eigen::Ref<Vector> out) const { out(0) = s.x; }

  double stationary_variance() const { return sigma_ * sigma_ / (2.0 * theta_); }
  Vector speed_mean() const { return Vector::Zero(1); }
  Matrix stationary_covariance(double lag) const;
  double decay_rate() const { return theta_; }
  double frequency() const { return 0.0; }

 private:
  double theta_;
  double sigma_;
};

/// dM = -Theta M dt + sigma dW with Theta = [[1, a], [-a, 1]], v(x) = x.
class OrnsteinUhlenbeck2d {
 public:
  using State = PlaneState;

  OrnsteinUhlenbeck2d(double a, double sigma);
  double a() const { return a_; }
  double sigma() const { return sigma_; }
  Eigen::Matrix2d drift_matrix() const;

  Eigen::Index dim() const { return 2; }
  State sample_initial(Rng& rng) const;
  State advance(const State& s, double dt, Rng& rng) const;
  void speed(const State& s, Eigen::Ref<Vector> out) const { out = s.x; }

  Vector speed_mean() const { return Vector::Zero(2); }
  Matrix stationary_covariance(double lag) const;
  double decay_rate() const { return 1.0; }
  double frequency() const { return std::abs(a_); }

 private:
  double a_;
  double sigma_;
};

/// Brownian motion with diffusivity a and drift b on the unit circle
/// (generator a d^2/dtheta^2 + b d/dtheta), v(theta) = sin(theta).
class CircleBrownian {
 public:
  using State = AngleState;

  CircleBrownian(double a, double b);
  double a() const { return a_; }
  double b() const { return b_; }

  Eigen::Index dim() const { return 1; }
  State sample_initial(Rng& rng) const;
  State advance(const State& s, double dt, Rng& rng) const;
  void speed(const State& s, Eigen::Ref<Vector> out) const { out(0) = std::sin(s.theta); }

  Vector speed_mean() const { return Vector::Zero(1); }
  Matrix stationary_covariance(double lag) const;
  double decay_rate() const { return a_; }
  double frequency() const { return std::abs(b_); }

 private:
  double a_;
  double b_;
};

using StateProcessModel = std::variant<FiniteChain, OrnsteinUhlenbeck1d, OrnsteinUhlenbeck2d, CircleBrownian>;
using AnyState = std::variant<ChainState, OuState, PlaneState, AngleState>;

Eigen::Index speed_dim(const StateProcessModel& model);
AnyState sample_initial(const StateProcessModel& model, Rng& rng);
/// Exact transition over model time dt > 0.
AnyState advance(const StateProcessModel& model, const AnyState& state, double dt, Rng& rng);
Vector speed(const StateProcessModel& model, const AnyState& state);
/// Cov(v(M_0), v(M_lag)) under stationarity (d x d, row index at time 0).
Matrix stationary_covariance(const StateProcessModel& model, double lag);
Vector speed_mean(const StateProcessModel& model);
/// Slowest exponential decay rate and fastest oscillation of the covariance.
double covariance_decay_rate(const StateProcessModel& model);
double covariance_frequency(const StateProcessModel& model);
const char* model_name(const StateProcessModel& model);

}  // namespace active
