#pragma once

// Large deviations of X_t / t for finite internal chains: the empirical-measure
// rate I_e, the free energy F(alpha) and its Legendre transform I(x).

#include "active/particle.hpp"

#include <functional>
#include <string>
#include <vector>

namespace active {

/// Probability vector on the internal states.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(Vector xi);
  Eigen::Index size() const { return xi_.size(); }
  const Vector& weights() const { return xi_; }

 private:
  Vector xi_;
};

enum class DvMethod { automatic, general };

struct DvResult {
  double value = 0.0;
  Vector phi;  // log of the optimal u, phi(0) = 0 (empty for the closed form)
  bool closed_form = false;
  bool converged = true;
  int iterations = 0;
};

/// sup_{u > 0} -sum_i xi_i (A u)_i / u_i. The automatic method uses the
/// closed form (u, -A u) with u = sqrt(xi / mu) for reversible generators.
DvResult dv_rate_detail(const FiniteGenerator& gen, const StationaryMeasure& mu, const EmpiricalMeasure& xi,
                        DvMethod method = DvMethod::automatic);
double dv_rate(const FiniteGenerator& gen, const StationaryMeasure& mu, const EmpiricalMeasure& xi,
               DvMethod method = DvMethod::automatic);

enum class FreeEnergyMethod { eigenvalue, variational };
const char* method_name(FreeEnergyMethod m);

/// Walk part of F: 2 kappa sum_i (cosh alpha_i - 1), or kappa |alpha|^2 for the continuum variant.
double walk_free_energy(const ParticleParams& params, const Vector& alpha);

/// Largest eigenvalue of gamma A + lambda diag(e^{alpha . v_i} - 1) (lattice)
/// or gamma A + lambda diag(alpha . v_i) (continuum).
double tilted_eigenvalue(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                         const ParticleParams& params, const Vector& alpha);

double free_energy(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                   const ParticleParams& params, const Vector& alpha,
                   FreeEnergyMethod method = FreeEnergyMethod::eigenvalue);

/// Gradient of the eigenvalue-route F from the Perron eigenvectors.
Vector free_energy_gradient(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                            const ParticleParams& params, const Vector& alpha);

struct FreeEnergySamples {
  std::vector<Vector> alphas;
  std::vector<double> values;
  FreeEnergyMethod method = FreeEnergyMethod::eigenvalue;
};
FreeEnergySamples sample_free_energy(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                     const ParticleParams& params, const std::vector<Vector>& alphas,
                                     FreeEnergyMethod method = FreeEnergyMethod::eigenvalue);

/// A convex free energy on R^d as a callable, with an optional gradient.
struct FreeEnergyFunction {
  Eigen::Index dim = 1;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;  // may be empty
  double alpha_cap = 50.0;                        // |alpha| beyond which F is not evaluated
};
FreeEnergyFunction make_free_energy(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                    const ParticleParams& params);

/// I(x) = sup_alpha (alpha . x - F(alpha)); +infinity when the maximizer
/// leaves the box |alpha| <= alpha_cap.
double rate_function(const FreeEnergyFunction& f, const Vector& x);

struct RateFunctionSamples {
  std::vector<Vector> xs;
  std::vector<double> values;
};
RateFunctionSamples sample_rate_function(const FreeEnergyFunction& f, const std::vector<Vector>& xs);

struct DominanceReport {
  std::vector<Vector> alphas;
  std::vector<double> f_a, f_sym;
  std::vector<Vector> xs;
  std::vector<double> i_a, i_sym;
  std::vector<Vector> xis;
  std::vector<double> ie_a, ie_sym;
  double worst_free_energy = 0.0;  // max F^A - F^sym
  double worst_rate = 0.0;         // max I^sym - I^A
  double worst_empirical = 0.0;    // max I_e^sym - I_e^A
  bool holds = false;
};
DominanceReport dominance_check(const FiniteGenerator& gen, const StationaryMeasure& mu, const MuFunction& v,
                                const ParticleParams& params, const std::vector<Vector>& alphas,
                                const std::vector<Vector>& xs, const std::vector<Vector>& xis = {},
                                double slack = 1e-8);

struct EmpiricalFreeEnergy {
  double value = 0.0;  // (1/T) log mean exp(alpha . X_T)
  double ci_low = 0.0;
  double ci_high = 0.0;
  double effective_sample_size = 0.0;
  std::size_t replicas = 0;
  double horizon = 0.0;
  std::string warning;  // non-empty when the effective sample size is below 100
};

/// (1/T) log of the sample mean of exp(alpha . x) over the rows of x, with a
/// percentile bootstrap interval.
EmpiricalFreeEnergy empirical_free_energy(const Matrix& endpoints, double horizon, const Vector& alpha,
                                          std::uint64_t seed, int bootstrap = 200);
EmpiricalFreeEnergy empirical_free_energy(const StateProcessModel& model, const ParticleParams& params,
                                          const Vector& alpha, double horizon, std::size_t replicas,
                                          std::uint64_t seed, const SimulationOptions& options = {},
                                          int bootstrap = 200);

}  // namespace active
