#include "active/two_state.hpp"

#include <cmath>
#include <stdexcept>

namespace active {
namespace {

// cos q - 1 without cancellation near q = 0
template <class T>
T cos_minus_one(T q) {
  const T s = std::sin(q / 2.0);
  return -2.0 * s * s;
}

double sinh_half_sq(double a) {
  const double s = std::sinh(0.5 * a);
  return s * s;
}

/// sqrt(g^2 + s^2) - g computed as s^2 / (sqrt(g^2 + s^2) + g).
double root_excess(double g, double s2) { return s2 / (std::sqrt(g * g + s2) + g); }

}  // namespace

void TwoStateParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be non-negative");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be non-negative");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("alpha0 must lie in [0, 1]");
}

Matrix2c tilt_matrix(const TwoStateParams& p, Complex q) {
  p.validate();
  const Complex r = (2.0 * p.kappa + p.lambda) * cos_minus_one(q) - p.gamma;
  const Complex s = p.lambda * std::sin(q);
  const Complex i(0.0, 1.0);
  Matrix2c m;
  m << r + i * s, p.gamma, p.gamma, r - i * s;
  return m;
}

Complex fourier_laplace(const TwoStateParams& p, double q, double z) {
  p.validate();
  if (!(z > 0.0)) throw std::invalid_argument("z must be positive");
  const double u = z - (2.0 * p.kappa + p.lambda) * cos_minus_one(q);
  const double s = p.lambda * std::sin(q);
  // (z - r)^2 - gamma^2 with z - r = u + gamma, factored to avoid cancellation
  const double den = u * (u + 2.0 * p.gamma) + s * s;
  return Complex(u + 2.0 * p.gamma, s * (2.0 * p.alpha0 - 1.0)) / den;
}

Complex fourier_laplace_resolvent(const TwoStateParams& p, double q, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("z must be positive");
  const Matrix2c m = tilt_matrix(p, Complex(q, 0.0));
  const Matrix2c sys = Complex(z, 0.0) * Matrix2c::Identity() - m;
  const Eigen::Vector2cd mu0(p.alpha0, 1.0 - p.alpha0);
  const Eigen::Vector2cd x = sys.partialPivLu().solve(mu0);
  return x.sum();
}

Matrix2c matrix_exponential_G(const TwoStateParams& p, Complex q, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  const Matrix2c m = tilt_matrix(p, q);
  const Complex a = 0.5 * (m(0, 0) + m(1, 1));
  Matrix2c n = m;
  n.diagonal().array() -= a;
  const Complex b2 = Complex(p.gamma * p.gamma, 0.0) - std::pow(p.lambda * std::sin(q), 2);
  const Complex b = std::sqrt(b2);
  Complex c, s;  // e^{tA} cosh(Bt), e^{tA} sinh(Bt) / B
  if (std::abs(b * t) < 0.1) {
    // even power series in B, valid through B = 0
    const Complex x = b2 * t * t;
    Complex term_c(1.0, 0.0), term_s(t, 0.0);
    c = term_c;
    s = term_s;
    for (int k = 1; k < 14; ++k) {
      term_c *= x / double((2 * k - 1) * (2 * k));
      term_s *= x / double((2 * k) * (2 * k + 1));
      c += term_c;
      s += term_s;
    }
    const Complex e = std::exp(a * t);
    c *= e;
    s *= e;
  } else {
    const Complex ep = std::exp((a + b) * t), em = std::exp((a - b) * t);
    c = 0.5 * (ep + em);
    s = (ep - em) / (2.0 * b);
  }
  return c * Matrix2c::Identity() + s * n;
}

double log_mgf(const TwoStateParams& p, double alpha, double t) {
  p.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  if (t == 0.0) return 0.0;
  const double r = (2.0 * p.kappa + p.lambda) * 2.0 * sinh_half_sq(alpha) - p.gamma;
  const double s = p.lambda * std::sinh(alpha);
  const double b = std::sqrt(p.gamma * p.gamma + s * s);
  const double c = p.gamma + s * (2.0 * p.alpha0 - 1.0);
  const double e = std::exp(-2.0 * b * t);
  // e^{t(r + B)} [ (1 + e^{-2Bt}) / 2 + (c / B)(1 - e^{-2Bt}) / 2 ]
  return t * (r + b) + std::log(0.5 * (1.0 + e) - 0.5 * (c / b) * std::expm1(-2.0 * b * t));
}

double mgf(const TwoStateParams& p, double alpha, double t) { return std::exp(log_mgf(p, alpha, t)); }

double free_energy_closed(const TwoStateParams& p, double alpha) {
  p.validate();
  const double s = p.lambda * std::sinh(alpha);
  return (2.0 * p.kappa + p.lambda) * 2.0 * sinh_half_sq(alpha) + root_excess(p.gamma, s * s);
}

double continuum_limit_free_energy(const TwoStateParams& p, double alpha) {
  p.validate();
  const double s = p.lambda * alpha;
  return p.kappa * alpha * alpha + root_excess(p.gamma, s * s);
}

double rescaled_free_energy(const TwoStateParams& p, double alpha, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  TwoStateParams s = p;
  s.lambda = eps * p.lambda;
  s.gamma = eps * eps * p.gamma;
  return free_energy_closed(s, eps * alpha) / (eps * eps);
}

double diffusion_constant(const TwoStateParams& p) {
  p.validate();
  return 2.0 * p.kappa + p.lambda + p.lambda * p.lambda / p.gamma;
}

std::vector<ScalingRow> scaling_check(const TwoStateParams& p, const std::vector<double>& eps,
                                      const std::vector<double>& qs, const std::vector<double>& zs) {
  const double sigma2 = diffusion_constant(p);
  std::vector<ScalingRow> rows;
  for (double e : eps)
    for (double q : qs)
      for (double z : zs) {
        ScalingRow r;
        r.eps = e;
        r.q = q;
        r.z = z;
        r.value = e * e * fourier_laplace(p, e * q, e * e * z);
        r.limit = 1.0 / (z + 0.5 * q * q * sigma2);
        r.rel_error = std::abs(r.value - r.limit) / std::abs(r.limit);
        rows.push_back(r);
      }
  return rows;
}

}  // namespace active
