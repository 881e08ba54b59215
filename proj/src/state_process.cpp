#include "active/state_process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace active {
namespace {

Eigen::Index draw_categorical(const std::vector<double>& cdf, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, cdf.back());
  const double u = unif(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<Eigen::Index>(it - cdf.begin(), static_cast<Eigen::Index>(cdf.size()) - 1);
}

void require_positive_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("advance requires dt > 0");
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

FiniteChain::FiniteChain(FiniteGenerator generator, MuFunction speed)
    : generator_(std::move(generator)),
      mu_(stationary_measure(generator_)),
      speed_(std::move(speed)),
      scales_(spectral_scales(generator_)) {
  const Eigen::Index n = generator_.size();
  if (speed_.size() != n) throw std::invalid_argument("speed function does not match the state count");
  if (speed_.dim() < 1) throw std::invalid_argument("speed function needs at least one column");
  jump_cdf_.resize(n);
  jump_targets_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || generator_(i, j) <= 0.0) continue;
      acc += generator_(i, j);
      jump_cdf_[i].push_back(acc);
      jump_targets_[i].push_back(j);
    }
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) initial_cdf_.push_back(acc += mu_[i]);
}

FiniteChain::State FiniteChain::sample_initial(Rng& rng) const { return {draw_categorical(initial_cdf_, rng)}; }

double FiniteChain::sample_holding(const State& s, Rng& rng) const {
  const double rate = generator_.exit_rate(s.index);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exponential_distribution<double>(rate)(rng);
}

FiniteChain::State FiniteChain::sample_jump(const State& s, Rng& rng) const {
  const auto& cdf = jump_cdf_[s.index];
  if (cdf.empty()) return s;
  return {jump_targets_[s.index][draw_categorical(cdf, rng)]};
}

FiniteChain::State FiniteChain::advance(const State& s, double dt, Rng& rng) const {
  require_positive_dt(dt);
  State cur = s;
  double left = dt;
  for (;;) {
    const double hold = sample_holding(cur, rng);
    if (hold >= left) return cur;
    left -= hold;
    cur = sample_jump(cur, rng);
  }
}

Matrix FiniteChain::stationary_covariance(double lag) const {
  if (lag < 0.0) throw std::invalid_argument("lag must be non-negative");
  const Matrix& v = speed_.values();
  const Matrix p = transition_matrix(generator_, mu_, lag);
  const Vector m = speed_mean();
  return v.transpose() * mu_.weights().asDiagonal() * p * v - m * m.transpose();
}

OrnsteinUhlenbeck1d::OrnsteinUhlenbeck1d(double theta, double sigma) : theta_(theta), sigma_(sigma) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("ou1d: theta must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("ou1d: sigma must be positive");
}

OrnsteinUhlenbeck1d::State OrnsteinUhlenbeck1d::sample_initial(Rng& rng) const {
  return {std::normal_distribution<double>(0.0, std::sqrt(stationary_variance()))(rng)};
}

OrnsteinUhlenbeck1d::State OrnsteinUhlenbeck1d::advance(const State& s, double dt, Rng& rng) const {
  require_positive_dt(dt);
  const double decay = std::exp(-theta_ * dt);
  // 1 - e^{-2 theta dt} without cancellation for small dt
  const double var = stationary_variance() * -std::expm1(-2.0 * theta_ * dt);
  return {decay * s.x + std::sqrt(var) * std::normal_distribution<double>()(rng)};
}

Matrix OrnsteinUhlenbeck1d::stationary_covariance(double lag) const {
  if (lag < 0.0) throw std::invalid_argument("lag must be non-negative");
  return Matrix::Constant(1, 1, stationary_variance() * std::exp(-theta_ * lag));
}

OrnsteinUhlenbeck2d::OrnsteinUhlenbeck2d(double a, double sigma) : a_(a), sigma_(sigma) {
  if (!std::isfinite(a)) throw std::invalid_argument("ou2d: a must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("ou2d: sigma must be positive");
}

Eigen::Matrix2d OrnsteinUhlenbeck2d::drift_matrix() const {
  Eigen::Matrix2d theta;
  theta << 1.0, a_, -a_, 1.0;
  return theta;
}

OrnsteinUhlenbeck2d::State OrnsteinUhlenbeck2d::sample_initial(Rng& rng) const {
  std::normal_distribution<double> n01;
  const double sd = sigma_ / std::sqrt(2.0);
  return {Eigen::Vector2d(sd * n01(rng), sd * n01(rng))};
}

OrnsteinUhlenbeck2d::State OrnsteinUhlenbeck2d::advance(const State& s, double dt, Rng& rng) const {
  require_positive_dt(dt);
  // e^{-Theta dt} = e^{-dt} R(a dt); the noise covariance is isotropic because
  // Theta is a scaled rotation.
  const Eigen::Matrix2d prop = std::exp(-dt) * rotation(a_ * dt);
  const double sd = std::sqrt(0.5 * sigma_ * sigma_ * -std::expm1(-2.0 * dt));
  std::normal_distribution<double> n01;
  const double z0 = n01(rng);
  const double z1 = n01(rng);
  return {prop * s.x + sd * Eigen::Vector2d(z0, z1)};
}

Matrix OrnsteinUhlenbeck2d::stationary_covariance(double lag) const {
  if (lag < 0.0) throw std::invalid_argument("lag must be non-negative");
  const Eigen::Matrix2d prop = std::exp(-lag) * rotation(a_ * lag);
  return Matrix(0.5 * sigma_ * sigma_ * prop.transpose());
}

CircleBrownian::CircleBrownian(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("circle: a must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("circle: b must be non-negative");
}

CircleBrownian::State CircleBrownian::sample_initial(Rng& rng) const {
  return {std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng)};
}

CircleBrownian::State CircleBrownian::advance(const State& s, double dt, Rng& rng) const {
  require_positive_dt(dt);
  const double step = b_ * dt + std::sqrt(2.0 * a_ * dt) * std::normal_distribution<double>()(rng);
  double theta = std::fmod(s.theta + step, 2.0 * std::numbers::pi);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  return {theta};
}

Matrix CircleBrownian::stationary_covariance(double lag) const {
  if (lag < 0.0) throw std::invalid_argument("lag must be non-negative");
  return Matrix::Constant(1, 1, 0.5 * std::exp(-a_ * lag) * std::cos(b_ * lag));
}

Eigen::Index speed_dim(const StateProcessModel& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

AnyState sample_initial(const StateProcessModel& model, Rng& rng) {
  return std::visit([&](const auto& m) -> AnyState { return m.sample_initial(rng); }, model);
}

AnyState advance(const StateProcessModel& model, const AnyState& state, double dt, Rng& rng) {
  return std::visit(
      [&](const auto& m) -> AnyState {
        using S = typename std::decay_t<decltype(m)>::State;
        return m.advance(std::get<S>(state), dt, rng);
      },
      model);
}

Vector speed(const StateProcessModel& model, const AnyState& state) {
  return std::visit(
      [&](const auto& m) {
        using S = typename std::decay_t<decltype(m)>::State;
        Vector out(m.dim());
        m.speed(std::get<S>(state), out);
        return out;
      },
      model);
}

Matrix stationary_covariance(const StateProcessModel& model, double lag) {
  return std::visit([&](const auto& m) { return m.stationary_covariance(lag); }, model);
}

Vector speed_mean(const StateProcessModel& model) {
  return std::visit([](const auto& m) { return m.speed_mean(); }, model);
}

double covariance_decay_rate(const StateProcessModel& model) {
  return std::visit([](const auto& m) { return m.decay_rate(); }, model);
}

double covariance_frequency(const StateProcessModel& model) {
  return std::visit([](const auto& m) { return m.frequency(); }, model);
}

const char* model_name(const StateProcessModel& model) {
  struct Names {
    const char* operator()(const FiniteChain&) const { return "finite"; }
    const char* operator()(const OrnsteinUhlenbeck1d&) const { return "ou1d"; }
    const char* operator()(const OrnsteinUhlenbeck2d&) const { return "ou2d"; }
    const char* operator()(const CircleBrownian&) const { return "circle"; }
  };
  return std::visit(Names{}, model);
}

}  // namespace active
