#include "active/diffusion.hpp"

#include "active/quadrature.hpp"

#include <cmath>

namespace active {
namespace {

DiffusionReport assemble(const ParticleParams& p, const Matrix& sigma, const Vector& mean, const Matrix& poisson_gram,
                         DiffusionMethod method) {
  p.validate();
  const Eigen::Index d = sigma.rows();
  if (d != p.dim) throw std::invalid_argument("particle dim does not match the speed dimension");
  DiffusionReport r;
  r.method = method;
  r.walk = 2.0 * p.kappa * Matrix::Identity(d, d);
  if (p.variant == Variant::lattice)
    r.martingale = p.lambda * (sigma + mean * mean.transpose());
  else
    r.martingale = Matrix::Zero(d, d);
  r.active = (p.lambda * p.lambda / p.gamma) * (poisson_gram + poisson_gram.transpose());
  r.total = r.walk + r.martingale + r.active;
  r.drift = p.lambda * mean;
  return r;
}

}  // namespace

const char* method_name(DiffusionMethod m) {
  switch (m) {
    case DiffusionMethod::generator_solve: return "generator-solve";
    case DiffusionMethod::green_kubo: return "green-kubo-quadrature";
    case DiffusionMethod::closed_form: return "closed-form";
  }
  return "?";
}

DiffusionReport diffusion_finite(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                 const ParticleParams& params) {
  require_stationary(gen, mu);
  const Vector c = v.mean(mu).transpose();
  const MuFunction centered = v.centered(mu);
  const MuFunction w = solve_poisson(gen, mu, centered);
  const Matrix sigma = gram(mu, centered, centered);
  return assemble(params, sigma, c, gram(mu, centered, w), DiffusionMethod::generator_solve);
}

DiffusionReport diffusion_finite(const FiniteChain& chain, const ParticleParams& params) {
  return diffusion_finite(chain.generator(), chain.measure(), chain.speed_function(), params);
}

Matrix integrated_covariance(const StateProcessModel& model, double tail_tol) {
  TailControl ctl;
  ctl.decay_rate = covariance_decay_rate(model);
  ctl.frequency = covariance_frequency(model);
  const double scale = std::max(1.0, stationary_covariance(model, 0.0).cwiseAbs().maxCoeff());
  ctl.tail_tol = tail_tol * scale;
  return integrate_to_infinity([&](double r) { return stationary_covariance(model, r); }, ctl);
}

DiffusionReport diffusion_green_kubo(const StateProcessModel& model, const ParticleParams& params) {
  const Matrix sigma = stationary_covariance(model, 0.0);
  return assemble(params, sigma, speed_mean(model), integrated_covariance(model), DiffusionMethod::green_kubo);
}

DiffusionReport diffusion_closed_form(const StateProcessModel& model, const ParticleParams& params) {
  struct Visitor {
    const ParticleParams& p;
    DiffusionReport operator()(const FiniteChain& m) const {
      DiffusionReport r = diffusion_finite(m, p);
      r.method = DiffusionMethod::closed_form;
      return r;
    }
    DiffusionReport operator()(const OrnsteinUhlenbeck1d& m) const {
      // w(x) = x / theta, so (v, w) = E x^2 / theta
      const double var = m.stationary_variance();
      return assemble(p, Matrix::Constant(1, 1, var), Vector::Zero(1), Matrix::Constant(1, 1, var / m.theta()),
                      DiffusionMethod::closed_form);
    }
    DiffusionReport operator()(const OrnsteinUhlenbeck2d& m) const {
      // w = Theta^{-1} x, (v_i, w_j) = (sigma^2 / 2) (Theta^{-1})_{ji}
      const double var = 0.5 * m.sigma() * m.sigma();
      const Eigen::Matrix2d inv = m.drift_matrix().inverse();
      return assemble(p, var * Matrix::Identity(2, 2), Vector::Zero(2), Matrix(var * inv.transpose()),
                      DiffusionMethod::closed_form);
    }
    DiffusionReport operator()(const CircleBrownian& m) const {
      // w = (a sin + b cos) / (a^2 + b^2); only the sine component pairs with v
      const double a = m.a(), b = m.b();
      return assemble(p, Matrix::Constant(1, 1, 0.5), Vector::Zero(1),
                      Matrix::Constant(1, 1, 0.5 * a / (a * a + b * b)), DiffusionMethod::closed_form);
    }
  };
  return std::visit(Visitor{params}, model);
}

Matrix finite_horizon_covariance_rate(const StateProcessModel& model, const ParticleParams& params, double horizon) {
  params.validate();
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const Eigen::Index d = speed_dim(model);
  const Vector c = speed_mean(model);
  Matrix out = 2.0 * params.kappa * Matrix::Identity(d, d);
  if (params.variant == Variant::lattice)
    out += params.lambda * (stationary_covariance(model, 0.0) + c * c.transpose());
  // lambda^2 / T * int_0^T int_0^T C(gamma |s - r|) = 2 lambda^2 int_0^T (1 - r/T) sym C(gamma r) dr
  const double rate = params.gamma * std::max({covariance_decay_rate(model), covariance_frequency(model), 1e-3});
  const Matrix integral = integrate_panels(
      [&](double r) {
        const Matrix cov = stationary_covariance(model, params.gamma * r);
        return Matrix((1.0 - r / horizon) * (cov + cov.transpose()));
      },
      0.0, horizon, 1.0 / rate);
  out += params.lambda * params.lambda * integral;
  return out;
}

}  // namespace active
