#pragma once

// Event-driven simulation of the active particle
//   X_t = Y_{2 kappa t} + int_0^t v(M_{gamma s}) dN_s
// and its continuum variant B_{2 kappa t} + lambda int_0^t v(M_{gamma s}) ds.

#include "active/state_process.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace active {

enum class Variant { lattice, continuum };

struct ParticleParams {
  double kappa = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
  int dim = 1;
  Variant variant = Variant::lattice;

  /// Throws std::invalid_argument on negative rates, gamma <= 0 or dim < 1.
  void validate() const;
};

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct SimulationOptions {
  /// Keep walk / martingale / active parts separately. Always on for finite
  /// chains (exact and free); for diffusive states it forces sub-stepping.
  bool track_parts = true;
  /// Sub-step in particle time for diffusive states; 0 picks
  /// 0.01 / (gamma * max(1, decay rate, frequency)).
  double substep = 0.0;
  /// Worker threads for replica loops; 0 means hardware concurrency.
  unsigned threads = 0;
};

enum class EventKind { start, walk, active_jump, state_change, end };
const char* event_kind_name(EventKind k);

struct TrajectoryPoint {
  double t = 0.0;
  EventKind kind = EventKind::start;
  Vector x;
  Vector walk;
  Vector martingale;
  Vector active;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  bool has_parts = false;
  /// Sum of squared martingale jumps, sum_k |v(tau_k)|^2.
  double quadratic_variation = 0.0;
  /// lambda int_0^T |v_s|^2 ds.
  double compensator = 0.0;
  const TrajectoryPoint& final() const { return points.back(); }
};

/// Deterministic per-replica seed derived from the master seed.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index);

Trajectory simulate(const StateProcessModel& model, const ParticleParams& params, double horizon,
                    std::uint64_t seed, const SimulationOptions& options = {});

/// X_T (and parts, if tracked) for R independent replicas, one row each.
struct EndpointSamples {
  double horizon = 0.0;
  Matrix x;
  bool has_parts = false;
  Matrix walk;
  Matrix martingale;
  Matrix active;
  Vector quadratic_variation;
  Vector compensator;
};

EndpointSamples sample_endpoints(const StateProcessModel& model, const ParticleParams& params, double horizon,
                                 std::size_t replicas, std::uint64_t seed, const SimulationOptions& options = {});

/// A statistic with its jackknife standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct MomentEstimate {
  std::size_t replicas = 0;
  double horizon = 0.0;
  std::vector<Estimate> mean;                      // E X_T per coordinate
  std::vector<std::vector<Estimate>> covariance;   // Cov(X_T)
  bool has_parts = false;
  std::vector<std::vector<Estimate>> walk, martingale, active;
  // cross-covariances Cov(P_i, Q_j) for (walk, martingale), (walk, active), (martingale, active)
  std::vector<std::vector<Estimate>> walk_martingale, walk_active, martingale_active;
  Estimate qv_ratio;         // E[QV] / E[compensator]
  Estimate compensator_rate; // E[compensator] / T
};

MomentEstimate estimate_moments(const EndpointSamples& samples);
MomentEstimate estimate_moments(const StateProcessModel& model, const ParticleParams& params, double horizon,
                                std::size_t replicas, std::uint64_t seed, const SimulationOptions& options = {});

/// Jackknife estimate of Cov(a, b) from paired samples (R >= 3).
Estimate jackknife_covariance(const Vector& a, const Vector& b);
/// Jackknife estimate of the mean (R >= 2).
Estimate jackknife_mean(const Vector& a);
/// Jackknife estimate of mean(a) / mean(b).
Estimate jackknife_ratio(const Vector& a, const Vector& b);

/// Riemann sums sum_i v(s_i)(W(s_{i+1}) - W(s_i)) on uniform meshes for
/// W in {N, N - lambda s, lambda s}, all evaluated on the same realized paths.
struct RiemannRow {
  double mesh = 0.0;
  // root-mean-square distance to the next finer mesh, per integrator
  double l2_next_n = 0.0, l2_next_compensated = 0.0, l2_next_drift = 0.0;
};

struct RiemannReport {
  double horizon = 0.0;
  std::size_t replicas = 0;
  std::vector<RiemannRow> rows;  // coarse to fine
  double final_mesh = 0.0;
  // E|R_h - I| / E|I| at the final mesh against the event-driven value I
  double gap_n = 0.0, gap_compensated = 0.0, gap_drift = 0.0;
  int inversions = 0;  // worst count of increases along the l2 sequence
};

struct RiemannOptions {
  int k_min = 3;
  int k_max = 10;
  double final_mesh_fraction = 1e-4;
  std::size_t replicas = 20000;
  unsigned threads = 0;
};

/// Finite chains only: the realized path is piecewise constant, so every
/// Riemann sum is evaluated exactly from the event lists.
RiemannReport riemann_integral_convergence(const StateProcessModel& model, const ParticleParams& params,
                                           double horizon, std::uint64_t seed, const RiemannOptions& options = {});

struct QvCheck {
  double realized = 0.0;
  double compensator = 0.0;
};
/// Throws std::invalid_argument if the trajectory carries no parts.
QvCheck quadratic_variation_check(const Trajectory& trajectory);

/// Runs body(i) for i in [0, count) over contiguous blocks on `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);
unsigned resolve_threads(unsigned requested);

}  // namespace active
