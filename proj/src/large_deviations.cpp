#include "active/large_deviations.hpp"

#include <boost/math/tools/minima.hpp>
#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace active {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The line search logs harmless warnings (e.g. a degenerate interpolation
// polynomial) to stderr; only errors are worth surfacing.
void quiet_solver_logging() {
  static const bool once = [] {
    FLAGS_minloglevel = google::GLOG_ERROR;
    return true;
  }();
  (void)once;
}

// ---------------------------------------------------------------------------
// Donsker-Varadhan functional in log coordinates:
//   J(phi) = sum_i xi_i q_i - sum_{i != j} xi_i A_ij exp(phi_j - phi_i),
// concave, with phi_0 = 0 fixing the scale of u = exp(phi).

struct DvObjective {
  const Matrix& a;
  const Vector& xi;

  double value(const Vector& phi) const {
    double j = 0.0;
    const Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (xi(i) == 0.0) continue;
      j -= xi(i) * a(i, i);
      for (Eigen::Index k = 0; k < n; ++k)
        if (k != i && a(i, k) > 0.0) j -= xi(i) * a(i, k) * std::exp(phi(k) - phi(i));
    }
    return j;
  }

  // E_ik = xi_i A_ik exp(phi_k - phi_i); gradient out - in, Hessian a weighted Laplacian
  void derivatives(const Vector& phi, Vector& grad, Matrix& hess) const {
    const Eigen::Index n = a.rows();
    grad.setZero(n);
    hess.setZero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (xi(i) == 0.0) continue;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || a(i, k) <= 0.0) continue;
        const double e = xi(i) * a(i, k) * std::exp(phi(k) - phi(i));
        grad(i) += e;
        grad(k) -= e;
        hess(i, k) += e;
        hess(k, i) += e;
        hess(i, i) -= e;
        hess(k, k) -= e;
      }
    }
  }
};

struct NewtonOutcome {
  double value;
  Vector phi;
  bool converged;
  int iterations;
};

NewtonOutcome maximize_dv(const DvObjective& obj, Vector phi) {
  const Eigen::Index n = phi.size();
  const double scale = std::max(1.0, obj.xi.dot(-obj.a.diagonal()));
  double val = obj.value(phi);
  Vector grad;
  Matrix hess;
  for (int it = 0; it < 400; ++it) {
    obj.derivatives(phi, grad, hess);
    const Vector g = grad.tail(n - 1);
    if (g.cwiseAbs().maxCoeff() <= 1e-14 * scale) return {val, phi, true, it};
    Matrix neg = -hess.bottomRightCorner(n - 1, n - 1);
    const double ridge = 1e-12 * std::max(1.0, neg.diagonal().cwiseAbs().maxCoeff());
    neg.diagonal().array() += ridge;
    const Vector step = neg.ldlt().solve(g);
    // backtracking on the concave objective
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      Vector trial = phi;
      trial.tail(n - 1) += t * step;
      const double tv = obj.value(trial);
      if (std::isfinite(tv) && tv >= val) {
        moved = tv > val;
        phi = std::move(trial);
        val = tv;
        break;
      }
    }
    if (!moved) return {val, phi, g.cwiseAbs().maxCoeff() <= 1e-9 * scale, it};
  }
  obj.derivatives(phi, grad, hess);
  return {val, phi, grad.tail(n - 1).cwiseAbs().maxCoeff() <= 1e-9 * scale, 400};
}

DvResult dv_general(const FiniteGenerator& gen, const StationaryMeasure& mu, const Vector& xi) {
  const Eigen::Index n = gen.size();
  DvResult best;
  best.value = -kInf;
  if (n == 1) {
    best.value = 0.0;
    best.phi = Vector::Zero(1);
    return best;
  }
  const DvObjective obj{gen.rates(), xi};
  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(n));
  Vector guess(n);
  for (Eigen::Index i = 0; i < n; ++i)
    guess(i) = xi(i) > 0.0 ? std::clamp(0.5 * std::log(xi(i) / mu[i]), -30.0, 30.0) : -30.0;
  starts.push_back(guess.array() - guess(0));
  Rng rng(0x5eedULL);
  std::normal_distribution<double> n01;
  for (int s = 0; s < 3; ++s) {
    Vector r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = n01(rng);
    starts.push_back(r.array() - r(0));
  }
  bool any = false;
  for (const Vector& s : starts) {
    NewtonOutcome out = maximize_dv(obj, s);
    any = any || out.converged;
    // values within rounding of each other are ties; a converged start wins a tie
    const double tie = 1e-12 * std::max(1.0, std::abs(out.value));
    const bool better = !std::isfinite(best.value) || out.value > best.value + tie ||
                        (out.value >= best.value - tie && out.converged && !best.converged);
    if (better) {
      best.value = out.value;
      best.phi = std::move(out.phi);
      best.converged = out.converged;
      best.iterations = out.iterations;
    }
  }
  if (!any) throw NumericalError("dv_rate: optimizer did not converge from any start");
  best.value = std::max(best.value, 0.0);
  return best;
}

/// dI_e / dxi_i = -(A u)_i / u_i at the optimal u (envelope theorem).
Vector dv_gradient(const Matrix& a, const Vector& phi) {
  const Eigen::Index n = a.rows();
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = -a(i, i);
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != i && a(i, k) > 0.0) s -= a(i, k) * std::exp(phi(k) - phi(i));
    g(i) = s;
  }
  return g;
}

Matrix tilted_matrix(const FiniteGenerator& gen, const MuFunction& v, const ParticleParams& p, const Vector& alpha) {
  const Vector proj = v.values() * alpha;
  Matrix m = p.gamma * gen.rates();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    m(i, i) += p.lambda * (p.variant == Variant::lattice ? std::expm1(proj(i)) : proj(i));
  return m;
}

void check_tilt_inputs(const FiniteGenerator& gen, const MuFunction& v, const ParticleParams& p, const Vector& alpha) {
  p.validate();
  if (v.size() != gen.size()) throw std::invalid_argument("speed function does not match the state count");
  if (alpha.size() != v.dim()) throw std::invalid_argument("alpha dimension does not match the speed dimension");
  if (!alpha.allFinite()) throw std::invalid_argument("alpha must be finite");
}

struct Perron {
  double value;
  Vector left, right;
};

Perron perron(const Matrix& m, bool want_vectors) {
  Eigen::EigenSolver<Matrix> es(m, want_vectors);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failure on the tilted generator");
  const Eigen::VectorXcd z = es.eigenvalues();
  Eigen::Index k = 0;
  z.real().maxCoeff(&k);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(z(k).imag()) > 1e-10 * scale) throw NumericalError("principal eigenvalue is not real");
  Perron p{z(k).real(), {}, {}};
  if (!want_vectors) return p;
  p.right = es.eigenvectors().col(k).real();
  Eigen::EigenSolver<Matrix> et(m.transpose(), true);
  Eigen::Index kt = 0;
  et.eigenvalues().real().maxCoeff(&kt);
  p.left = et.eigenvectors().col(kt).real();
  return p;
}

// ---------------------------------------------------------------------------
// Variational route: maximize h(xi) = sum xi_i c_i - gamma I_e(xi) over the
// simplex, xi = softmax(eta) with eta_0 = 0.

class VariationalObjective final : public ceres::FirstOrderFunction {
 public:
  VariationalObjective(const FiniteGenerator& gen, const StationaryMeasure& mu, Vector c, double gamma)
      : gen_(gen), mu_(mu), c_(std::move(c)), gamma_(gamma) {}

  int NumParameters() const override { return static_cast<int>(c_.size()) - 1; }

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    const Eigen::Index n = c_.size();
    Vector eta = Vector::Zero(n);
    for (Eigen::Index i = 1; i < n; ++i) eta(i) = params[i - 1];
    const Vector xi = softmax(eta);
    DvResult dv;
    try {
      dv = dv_general(gen_, mu_, xi);
    } catch (const NumericalError&) {
      return false;
    }
    *cost = -(xi.dot(c_) - gamma_ * dv.value);
    if (gradient != nullptr) {
      const Vector g = c_ - gamma_ * dv_gradient(gen_.rates(), dv.phi);
      const double mean = xi.dot(g);
      for (Eigen::Index k = 1; k < n; ++k) gradient[k - 1] = -xi(k) * (g(k) - mean);
    }
    return std::isfinite(*cost);
  }

  static Vector softmax(const Vector& eta) {
    const double m = eta.maxCoeff();
    Vector e = (eta.array() - m).exp();
    return e / e.sum();
  }

 private:
  const FiniteGenerator& gen_;
  const StationaryMeasure& mu_;
  Vector c_;
  double gamma_;
};

double variational_tilt(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                        const ParticleParams& p, const Vector& alpha) {
  const Eigen::Index n = gen.size();
  const Vector proj = v.values() * alpha;
  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = p.lambda * (p.variant == Variant::lattice ? std::expm1(proj(i)) : proj(i));
  if (n == 1) return c(0);

  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(n - 1));
  Vector logmu = mu.weights().array().log();
  starts.push_back((logmu.tail(n - 1).array() - logmu(0)).matrix());
  Vector tilt = logmu + c / std::max(p.gamma, 1e-12);
  starts.push_back((tilt.tail(n - 1).array() - tilt(0)).matrix());
  Rng rng(0xfeedULL);
  std::normal_distribution<double> n01;
  for (int s = 0; s < 2; ++s) {
    Vector r(n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) r(i) = n01(rng);
    starts.push_back(r);
  }

  quiet_solver_logging();
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::BFGS;
  opts.max_num_iterations = 2000;
  opts.function_tolerance = 1e-16;
  opts.gradient_tolerance = 1e-13;
  opts.parameter_tolerance = 1e-14;
  opts.logging_type = ceres::SILENT;

  double best = -kInf;
  for (Vector x : starts) {
    ceres::GradientProblem problem(new VariationalObjective(gen, mu, c, p.gamma));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, x.data(), &summary);
    if (std::isfinite(summary.final_cost)) best = std::max(best, -summary.final_cost);
  }
  if (!std::isfinite(best)) throw NumericalError("variational free energy: optimizer failed from every start");
  return best;
}

class LegendreObjective final : public ceres::FirstOrderFunction {
 public:
  LegendreObjective(const FreeEnergyFunction& f, const Vector& x) : f_(f), x_(x) {}
  int NumParameters() const override { return static_cast<int>(x_.size()); }
  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    const Vector alpha = Eigen::Map<const Vector>(params, x_.size());
    if (alpha.norm() > 2.0 * f_.alpha_cap) return false;
    *cost = f_.value(alpha) - alpha.dot(x_);
    if (gradient != nullptr) Eigen::Map<Vector>(gradient, x_.size()) = f_.gradient(alpha) - x_;
    return std::isfinite(*cost);
  }

 private:
  const FreeEnergyFunction& f_;
  const Vector& x_;
};

FreeEnergyFunction with_numeric_gradient(FreeEnergyFunction f) {
  if (f.gradient) return f;
  auto value = f.value;
  const Eigen::Index d = f.dim;
  f.gradient = [value, d](const Vector& a) {
    Vector g(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(a(k)));
      Vector p = a, m = a;
      p(k) += h;
      m(k) -= h;
      g(k) = (value(p) - value(m)) / (2.0 * h);
    }
    return g;
  };
  return f;
}

double logsumexp(const Vector& y) {
  const double m = y.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((y.array() - m).exp().sum());
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(Vector xi) : xi_(std::move(xi)) {
  if (xi_.size() == 0) throw std::invalid_argument("empty empirical measure");
  if (!xi_.allFinite() || (xi_.array() < 0.0).any()) throw std::invalid_argument("xi must be non-negative");
  const double s = xi_.sum();
  if (std::abs(s - 1.0) > 1e-10) throw std::invalid_argument("xi must sum to one");
  xi_ /= s;
}

DvResult dv_rate_detail(const FiniteGenerator& gen, const StationaryMeasure& mu, const EmpiricalMeasure& xi,
                        DvMethod method) {
  if (xi.size() != gen.size() || mu.size() != gen.size()) throw std::invalid_argument("dimension mismatch");
  if (method == DvMethod::automatic && is_reversible(gen, mu)) {
    const Vector u = xi.weights().cwiseQuotient(mu.weights()).cwiseSqrt();
    DvResult r;
    r.closed_form = true;
    r.value = std::max(0.0, -inner(mu, u, gen.rates() * u));
    return r;
  }
  return dv_general(gen, mu, xi.weights());
}

double dv_rate(const FiniteGenerator& gen, const StationaryMeasure& mu, const EmpiricalMeasure& xi, DvMethod method) {
  return dv_rate_detail(gen, mu, xi, method).value;
}

const char* method_name(FreeEnergyMethod m) { return m == FreeEnergyMethod::eigenvalue ? "eigenvalue" : "variational"; }

double walk_free_energy(const ParticleParams& params, const Vector& alpha) {
  if (params.variant == Variant::continuum) return params.kappa * alpha.squaredNorm();
  double s = 0.0;
  // cosh(a) - 1 = 2 sinh^2(a / 2), exact near zero
  for (Eigen::Index i = 0; i < alpha.size(); ++i) s += 2.0 * std::pow(std::sinh(0.5 * alpha(i)), 2);
  return 2.0 * params.kappa * s;
}

double tilted_eigenvalue(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                         const ParticleParams& params, const Vector& alpha) {
  check_tilt_inputs(gen, v, params, alpha);
  const Matrix m = tilted_matrix(gen, v, params, alpha);
  if (is_reversible(gen, mu)) {
    // D^{1/2} M D^{-1/2} is symmetric
    const Vector s = mu.weights().cwiseSqrt();
    const Matrix sym = s.asDiagonal() * m * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }
  return perron(m, false).value;
}

double free_energy(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                   const ParticleParams& params, const Vector& alpha, FreeEnergyMethod method) {
  check_tilt_inputs(gen, v, params, alpha);
  require_stationary(gen, mu);
  const double walk = walk_free_energy(params, alpha);
  if (method == FreeEnergyMethod::eigenvalue) return walk + tilted_eigenvalue(gen, mu, v, params, alpha);
  return walk + variational_tilt(gen, mu, v, params, alpha);
}

Vector free_energy_gradient(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                            const ParticleParams& params, const Vector& alpha) {
  check_tilt_inputs(gen, v, params, alpha);
  (void)mu;
  const Matrix m = tilted_matrix(gen, v, params, alpha);
  const Perron p = perron(m, true);
  const Vector proj = v.values() * alpha;
  const double norm = p.left.dot(p.right);
  if (std::abs(norm) < 1e-300) throw NumericalError("degenerate Perron vectors");
  Vector grad(alpha.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double dm = params.lambda * v.values()(i, k) * (params.variant == Variant::lattice ? std::exp(proj(i)) : 1.0);
      s += p.left(i) * dm * p.right(i);
    }
    grad(k) = s / norm;
    grad(k) += params.variant == Variant::lattice ? 2.0 * params.kappa * std::sinh(alpha(k))
                                                  : 2.0 * params.kappa * alpha(k);
  }
  return grad;
}

FreeEnergySamples sample_free_energy(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                     const ParticleParams& params, const std::vector<Vector>& alphas,
                                     FreeEnergyMethod method) {
  FreeEnergySamples s;
  s.method = method;
  s.alphas = alphas;
  for (const Vector& a : alphas) s.values.push_back(free_energy(gen, mu, v, params, a, method));
  return s;
}

FreeEnergyFunction make_free_energy(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                    const ParticleParams& params) {
  require_stationary(gen, mu);
  FreeEnergyFunction f;
  f.dim = v.dim();
  // keep exp(alpha . v) and cosh(alpha) far from overflow
  const double vmax = v.values().rowwise().lpNorm<1>().maxCoeff();
  f.alpha_cap = std::min(50.0, 600.0 / std::max(1.0, vmax));
  f.value = [gen, mu, v, params](const Vector& a) { return free_energy(gen, mu, v, params, a); };
  f.gradient = [gen, mu, v, params](const Vector& a) { return free_energy_gradient(gen, mu, v, params, a); };
  return f;
}

double rate_function(const FreeEnergyFunction& fin, const Vector& x) {
  if (x.size() != fin.dim) throw std::invalid_argument("x dimension does not match the free energy");
  const FreeEnergyFunction f = with_numeric_gradient(fin);
  if (f.dim == 1) {
    const double xv = x(0);
    auto g = [&](double a) { return f.value(Vector::Constant(1, a)) - a * xv; };
    auto slope = [&](double a) { return f.gradient(Vector::Constant(1, a))(0) - xv; };
    // grow the bracket until the convex g turns upward on both sides
    double lo = -1.0, hi = 1.0;
    while (slope(hi) < 0.0) {
      if (hi >= f.alpha_cap) return kInf;
      lo = hi;
      hi = std::min(2.0 * hi, f.alpha_cap);
    }
    while (slope(lo) > 0.0) {
      if (lo <= -f.alpha_cap) return kInf;
      hi = lo;
      lo = std::max(2.0 * lo, -f.alpha_cap);
    }
    const auto best = boost::math::tools::brent_find_minima(g, lo, hi, std::numeric_limits<double>::digits / 2);
    return -best.second;
  }

  quiet_solver_logging();
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::BFGS;
  opts.max_num_iterations = 1000;
  opts.function_tolerance = 1e-16;
  opts.gradient_tolerance = 1e-12;
  opts.parameter_tolerance = 1e-14;
  opts.logging_type = ceres::SILENT;
  Vector alpha = Vector::Zero(f.dim);
  ceres::GradientProblem problem(new LegendreObjective(f, x));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, alpha.data(), &summary);
  if (alpha.norm() >= f.alpha_cap) return kInf;
  if (!std::isfinite(summary.final_cost)) throw NumericalError("Legendre transform did not converge");
  return -summary.final_cost;
}

RateFunctionSamples sample_rate_function(const FreeEnergyFunction& f, const std::vector<Vector>& xs) {
  RateFunctionSamples s;
  s.xs = xs;
  for (const Vector& x : xs) s.values.push_back(rate_function(f, x));
  return s;
}

DominanceReport dominance_check(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                const ParticleParams& params, const std::vector<Vector>& alphas,
                                const std::vector<Vector>& xs, const std::vector<Vector>& xis, double slack) {
  const FiniteGenerator sym = symmetric_part(gen, mu);
  DominanceReport r;
  r.alphas = alphas;
  r.xs = xs;
  r.xis = xis;
  r.worst_free_energy = r.worst_rate = r.worst_empirical = -kInf;
  for (const Vector& a : alphas) {
    r.f_a.push_back(free_energy(gen, mu, v, params, a));
    r.f_sym.push_back(free_energy(sym, mu, v, params, a));
    r.worst_free_energy = std::max(r.worst_free_energy, r.f_a.back() - r.f_sym.back());
  }
  const FreeEnergyFunction fa = make_free_energy(gen, mu, v, params);
  const FreeEnergyFunction fs = make_free_energy(sym, mu, v, params);
  for (const Vector& x : xs) {
    r.i_a.push_back(rate_function(fa, x));
    r.i_sym.push_back(rate_function(fs, x));
    const double diff = r.i_sym.back() - r.i_a.back();
    if (!std::isnan(diff)) r.worst_rate = std::max(r.worst_rate, diff);
  }
  for (const Vector& x : xis) {
    const EmpiricalMeasure e(x);
    r.ie_a.push_back(dv_rate(gen, mu, e));
    r.ie_sym.push_back(dv_rate(sym, mu, e));
    r.worst_empirical = std::max(r.worst_empirical, r.ie_sym.back() - r.ie_a.back());
  }
  r.holds = r.worst_free_energy <= slack && r.worst_rate <= slack && r.worst_empirical <= slack;
  return r;
}

EmpiricalFreeEnergy empirical_free_energy(const Matrix& endpoints, double horizon, const Vector& alpha,
                                          std::uint64_t seed, int bootstrap) {
  if (endpoints.cols() != alpha.size()) throw std::invalid_argument("alpha dimension does not match the samples");
  if (endpoints.rows() < 2) throw std::invalid_argument("need at least 2 replicas");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const Eigen::Index R = endpoints.rows();
  const Vector y = endpoints * alpha;
  const double log_r = std::log(static_cast<double>(R));
  EmpiricalFreeEnergy e;
  e.replicas = static_cast<std::size_t>(R);
  e.horizon = horizon;
  e.value = (logsumexp(y) - log_r) / horizon;
  const Eigen::ArrayXd w = (y.array() - y.maxCoeff()).exp();
  e.effective_sample_size = w.sum() * w.sum() / w.square().sum();
  if (e.effective_sample_size < 100.0)
    e.warning = "effective sample size " + std::to_string(e.effective_sample_size) + " is below 100";

  std::vector<double> boot;
  Rng rng(seed ^ 0xb0075742ULL);
  std::uniform_int_distribution<Eigen::Index> pick(0, R - 1);
  Vector ys(R);
  for (int b = 0; b < bootstrap; ++b) {
    for (Eigen::Index i = 0; i < R; ++i) ys(i) = y(pick(rng));
    boot.push_back((logsumexp(ys) - log_r) / horizon);
  }
  if (!boot.empty()) {
    std::sort(boot.begin(), boot.end());
    const auto at = [&](double q) {
      const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(boot.size() - 1) + 0.5));
      return boot[std::min(idx, boot.size() - 1)];
    };
    e.ci_low = std::min(at(0.025), e.value);
    e.ci_high = std::max(at(0.975), e.value);
  } else {
    e.ci_low = e.ci_high = e.value;
  }
  return e;
}

EmpiricalFreeEnergy empirical_free_energy(const StateProcessModel& model, const ParticleParams& params,
                                          const Vector& alpha, double horizon, std::size_t replicas,
                                          std::uint64_t seed, const SimulationOptions& options, int bootstrap) {
  SimulationOptions o = options;
  o.track_parts = false;
  const EndpointSamples s = sample_endpoints(model, params, horizon, replicas, seed, o);
  return empirical_free_energy(s.x, horizon, alpha, seed, bootstrap);
}

}  // namespace active
