#include "active/particle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <type_traits>

namespace active {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double draw_exp(double rate, Rng& rng) {
  if (rate <= 0.0) return kInf;
  return std::exponential_distribution<double>(rate)(rng);
}

struct ReplicaOut {
  Vector x, walk, martingale, active;
  double qv = 0.0;
  double compensator = 0.0;
  bool has_parts = false;
};

/// State shared by both simulation loops: positions, the Poisson clocks and
/// the optional trajectory recorder.
class Accumulator {
 public:
  Accumulator(const ParticleParams& p, Rng& rng, Trajectory* rec)
      : p_(p), rng_(rng), rec_(rec), d_(p.dim) {
    walk = Vector::Zero(d_);
    jumps = Vector::Zero(d_);
    integral = Vector::Zero(d_);
    if (p.variant == Variant::lattice) {
      walk_rate_ = 2.0 * p.kappa * d_;
      total_rate_ = walk_rate_ + p.lambda;
    }
  }

  double next_event() { return draw_exp(total_rate_, rng_); }

  /// Apply a Poisson event at time t given the current speed v.
  void fire(double t, const Vector& v) {
    const double u = std::uniform_real_distribution<double>(0.0, total_rate_)(rng_);
    if (u < walk_rate_) {
      // 2d equally likely moves: coordinate u / (2 kappa), sign by parity
      const int idx = std::min(2 * d_ - 1, static_cast<int>(u / p_.kappa));
      walk(idx / 2) += (idx % 2 == 0) ? 1.0 : -1.0;
      record(t, EventKind::walk);
    } else {
      jumps += v;
      qv += v.squaredNorm();
      record(t, EventKind::active_jump);
    }
  }

  void accumulate(const Vector& v0, const Vector& v1, double dt) {
    integral += 0.5 * dt * (v0 + v1);
    integral_sq += 0.5 * dt * (v0.squaredNorm() + v1.squaredNorm());
  }
  void accumulate(const Vector& v, double dt) {
    integral += dt * v;
    integral_sq += dt * v.squaredNorm();
  }

  void record(double t, EventKind kind) {
    if (rec_ == nullptr) return;
    advance_brownian(t);
    TrajectoryPoint pt;
    pt.t = t;
    pt.kind = kind;
    fill(pt.x, pt.walk, pt.martingale, pt.active);
    rec_->points.push_back(std::move(pt));
  }

  ReplicaOut finish(double horizon, bool has_parts) {
    advance_brownian(horizon);
    ReplicaOut out;
    fill(out.x, out.walk, out.martingale, out.active);
    out.has_parts = has_parts;
    if (p_.variant == Variant::lattice) {
      out.qv = qv;
      out.compensator = p_.lambda * integral_sq;
    }
    return out;
  }

  Vector walk, jumps, integral;
  double integral_sq = 0.0;
  double qv = 0.0;

 private:
  void advance_brownian(double t) {
    if (p_.variant != Variant::continuum || t <= brownian_time_) return;
    const double sd = std::sqrt(2.0 * p_.kappa * (t - brownian_time_));
    std::normal_distribution<double> n01;
    for (int i = 0; i < d_; ++i) walk(i) += sd * n01(rng_);
    brownian_time_ = t;
  }

  void fill(Vector& x, Vector& w, Vector& m, Vector& a) const {
    a = p_.lambda * integral;
    w = walk;
    if (p_.variant == Variant::lattice) {
      m = jumps - a;
      x = walk + jumps;
    } else {
      m = Vector::Zero(d_);
      x = walk + a;
    }
  }

  const ParticleParams& p_;
  Rng& rng_;
  Trajectory* rec_;
  int d_;
  double walk_rate_ = 0.0;
  double total_rate_ = 0.0;
  double brownian_time_ = 0.0;
};

ReplicaOut run_finite(const FiniteChain& m, const ParticleParams& p, double horizon, Rng& rng, Trajectory* rec) {
  Accumulator acc(p, rng, rec);
  auto state = m.sample_initial(rng);
  Vector v(p.dim);
  m.speed(state, v);
  double t = 0.0;
  double next_event = acc.next_event();
  double next_change = m.sample_holding(state, rng) / p.gamma;
  acc.record(0.0, EventKind::start);
  for (;;) {
    const double t_next = std::min({next_event, next_change, horizon});
    acc.accumulate(v, t_next - t);
    t = t_next;
    if (t >= horizon) break;
    if (next_change <= next_event) {
      state = m.sample_jump(state, rng);
      m.speed(state, v);
      next_change = t + m.sample_holding(state, rng) / p.gamma;
      if (p.variant == Variant::continuum) acc.record(t, EventKind::state_change);
    } else {
      acc.fire(t, v);
      next_event = t + acc.next_event();
    }
  }
  acc.record(horizon, EventKind::end);
  return acc.finish(horizon, true);
}

template <class Model>
ReplicaOut run_diffusive(const Model& m, const ParticleParams& p, double horizon, const SimulationOptions& o,
                         Rng& rng, Trajectory* rec) {
  Accumulator acc(p, rng, rec);
  const bool integrate = p.variant == Variant::continuum || o.track_parts;
  double h = o.substep;
  if (!(h > 0.0)) h = 0.01 / (p.gamma * std::max({1.0, m.decay_rate(), m.frequency()}));

  auto state = m.sample_initial(rng);
  Vector v(p.dim), v_new(p.dim);
  m.speed(state, v);
  double t = 0.0;
  double next_event = acc.next_event();
  long grid_k = 1;
  double next_grid = integrate ? h : kInf;
  acc.record(0.0, EventKind::start);
  for (;;) {
    const double t_next = std::min({next_event, next_grid, horizon});
    const double dt = t_next - t;
    if (dt > 0.0) {
      state = m.advance(state, p.gamma * dt, rng);
      m.speed(state, v_new);
      if (integrate) acc.accumulate(v, v_new, dt);
      v.swap(v_new);
    }
    t = t_next;
    if (t >= horizon) break;
    if (next_grid <= next_event) {
      next_grid = static_cast<double>(++grid_k) * h;
    } else {
      acc.fire(t, v);
      next_event = t + acc.next_event();
    }
  }
  acc.record(horizon, EventKind::end);
  return acc.finish(horizon, integrate);
}

ReplicaOut run_replica(const StateProcessModel& model, const ParticleParams& p, double horizon,
                       const SimulationOptions& o, Rng& rng, Trajectory* rec) {
  return std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FiniteChain>)
          return run_finite(m, p, horizon, rng, rec);
        else
          return run_diffusive(m, p, horizon, o, rng, rec);
      },
      model);
}

void check_inputs(const StateProcessModel& model, const ParticleParams& p, double horizon) {
  p.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon T must be positive");
  if (speed_dim(model) != p.dim)
    throw std::invalid_argument("particle dim " + std::to_string(p.dim) + " does not match speed dimension " +
                                std::to_string(speed_dim(model)));
}

std::vector<std::vector<Estimate>> cov_table(const Matrix& a, const Matrix& b) {
  std::vector<std::vector<Estimate>> out(a.cols(), std::vector<Estimate>(b.cols()));
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) out[i][j] = jackknife_covariance(a.col(i), b.col(j));
  return out;
}

}  // namespace

void ParticleParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be non-negative");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be non-negative");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (dim < 1) throw std::invalid_argument("dim must be at least 1");
}

const char* variant_name(Variant v) { return v == Variant::lattice ? "lattice" : "continuum"; }

Variant parse_variant(const std::string& name) {
  if (name == "lattice") return Variant::lattice;
  if (name == "continuum") return Variant::continuum;
  throw std::invalid_argument("unknown variant '" + name + "' (expected lattice or continuum)");
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::start: return "start";
    case EventKind::walk: return "walk";
    case EventKind::active_jump: return "active";
    case EventKind::state_change: return "state";
    case EventKind::end: return "end";
  }
  return "?";
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers;
    const std::size_t hi = count * (w + 1) / workers;
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Trajectory simulate(const StateProcessModel& model, const ParticleParams& params, double horizon, std::uint64_t seed,
                    const SimulationOptions& options) {
  check_inputs(model, params, horizon);
  Rng rng(seed);
  Trajectory traj;
  const ReplicaOut out = run_replica(model, params, horizon, options, rng, &traj);
  traj.has_parts = out.has_parts;
  traj.quadratic_variation = out.qv;
  traj.compensator = out.compensator;
  return traj;
}

EndpointSamples sample_endpoints(const StateProcessModel& model, const ParticleParams& params, double horizon,
                                 std::size_t replicas, std::uint64_t seed, const SimulationOptions& options) {
  check_inputs(model, params, horizon);
  if (replicas < 2) throw std::invalid_argument("need at least 2 replicas");
  const auto R = static_cast<Eigen::Index>(replicas);
  const int d = params.dim;
  EndpointSamples s;
  s.horizon = horizon;
  s.x.resize(R, d);
  s.walk.resize(R, d);
  s.martingale.resize(R, d);
  s.active.resize(R, d);
  s.quadratic_variation.resize(R);
  s.compensator.resize(R);
  std::vector<char> parts(replicas, 0);
  parallel_for(replicas, options.threads, [&](std::size_t i) {
    Rng rng(replica_seed(seed, i));
    const ReplicaOut out = run_replica(model, params, horizon, options, rng, nullptr);
    const auto r = static_cast<Eigen::Index>(i);
    s.x.row(r) = out.x.transpose();
    s.walk.row(r) = out.walk.transpose();
    s.martingale.row(r) = out.martingale.transpose();
    s.active.row(r) = out.active.transpose();
    s.quadratic_variation(r) = out.qv;
    s.compensator(r) = out.compensator;
    parts[i] = out.has_parts;
  });
  s.has_parts = parts[0] != 0;
  if (!s.has_parts) {
    s.walk.resize(0, 0);
    s.martingale.resize(0, 0);
    s.active.resize(0, 0);
  }
  return s;
}

Estimate jackknife_mean(const Vector& a) {
  const auto R = a.size();
  if (R < 2) throw std::invalid_argument("jackknife needs at least 2 samples");
  const double m = a.mean();
  // the jackknife variance of the sample mean is s^2 / R
  const double var = (a.array() - m).square().sum() / static_cast<double>(R - 1);
  return {m, std::sqrt(var / static_cast<double>(R))};
}

Estimate jackknife_covariance(const Vector& a, const Vector& b) {
  const auto R = a.size();
  if (R < 3 || b.size() != R) throw std::invalid_argument("jackknife covariance needs at least 3 paired samples");
  const double Rd = static_cast<double>(R);
  const Eigen::ArrayXd ac = a.array() - a.mean();
  const Eigen::ArrayXd bc = b.array() - b.mean();
  const Eigen::ArrayXd prod = ac * bc;
  const double sab = prod.sum();
  // leave-one-out covariances from the centered sums
  const Eigen::ArrayXd loo = (sab - prod * (Rd / (Rd - 1.0))) / (Rd - 2.0);
  const double spread = (loo - loo.mean()).square().sum();
  return {sab / (Rd - 1.0), std::sqrt((Rd - 1.0) / Rd * spread)};
}

Estimate jackknife_ratio(const Vector& a, const Vector& b) {
  const auto R = a.size();
  if (R < 2 || b.size() != R) throw std::invalid_argument("jackknife ratio needs at least 2 paired samples");
  const double Rd = static_cast<double>(R);
  const double sa = a.sum(), sb = b.sum();
  const Eigen::ArrayXd loo = (sa - a.array()) / (sb - b.array());
  const double spread = (loo - loo.mean()).square().sum();
  return {sa / sb, std::sqrt((Rd - 1.0) / Rd * spread)};
}

MomentEstimate estimate_moments(const EndpointSamples& s) {
  MomentEstimate e;
  e.replicas = static_cast<std::size_t>(s.x.rows());
  e.horizon = s.horizon;
  for (Eigen::Index i = 0; i < s.x.cols(); ++i) e.mean.push_back(jackknife_mean(s.x.col(i)));
  e.covariance = cov_table(s.x, s.x);
  e.has_parts = s.has_parts;
  if (s.has_parts) {
    e.walk = cov_table(s.walk, s.walk);
    e.martingale = cov_table(s.martingale, s.martingale);
    e.active = cov_table(s.active, s.active);
    e.walk_martingale = cov_table(s.walk, s.martingale);
    e.walk_active = cov_table(s.walk, s.active);
    e.martingale_active = cov_table(s.martingale, s.active);
    if (s.compensator.sum() > 0.0) e.qv_ratio = jackknife_ratio(s.quadratic_variation, s.compensator);
    const Estimate c = jackknife_mean(s.compensator);
    e.compensator_rate = {c.value / s.horizon, c.se / s.horizon};
  }
  return e;
}

MomentEstimate estimate_moments(const StateProcessModel& model, const ParticleParams& params, double horizon,
                                std::size_t replicas, std::uint64_t seed, const SimulationOptions& options) {
  return estimate_moments(sample_endpoints(model, params, horizon, replicas, seed, options));
}

QvCheck quadratic_variation_check(const Trajectory& trajectory) {
  if (!trajectory.has_parts) throw std::invalid_argument("trajectory has no decomposed parts");
  return {trajectory.quadratic_variation, trajectory.compensator};
}

RiemannReport riemann_integral_convergence(const StateProcessModel& model, const ParticleParams& params,
                                           double horizon, std::uint64_t seed, const RiemannOptions& options) {
  check_inputs(model, params, horizon);
  const auto* chain = std::get_if<FiniteChain>(&model);
  if (chain == nullptr) throw std::invalid_argument("riemann_integral_convergence supports finite chains only");
  if (options.k_min < 0 || options.k_max < options.k_min || options.k_max > 30)
    throw std::invalid_argument("invalid mesh range");
  if (!(options.final_mesh_fraction > 0.0) || options.final_mesh_fraction >= 1.0)
    throw std::invalid_argument("final mesh fraction must lie in (0, 1)");
  if (options.replicas < 2) throw std::invalid_argument("need at least 2 replicas");

  // meshes: T 2^-k for k = k_min..k_max+1, then the final mesh
  std::vector<long> cells;
  for (int k = options.k_min; k <= options.k_max + 1; ++k) cells.push_back(1L << k);
  cells.push_back(std::lround(1.0 / options.final_mesh_fraction));
  const std::size_t nm = cells.size();
  const int d = params.dim;
  const double lam = params.lambda;

  // per replica and mesh: Riemann sums for N and lambda s (the compensated
  // integrator is their difference)
  const std::size_t R = options.replicas;
  std::vector<Matrix> sum_n(R), sum_drift(R);
  std::vector<Vector> exact_n(R), exact_drift(R);

  parallel_for(R, options.threads, [&](std::size_t r) {
    Rng rng(replica_seed(seed, r));
    std::vector<double> times{0.0};
    std::vector<Eigen::Index> states{chain->sample_initial(rng).index};
    for (double t = chain->sample_holding({states.back()}, rng) / params.gamma; t < horizon;) {
      states.push_back(chain->sample_jump({states.back()}, rng).index);
      times.push_back(t);
      t += chain->sample_holding({states.back()}, rng) / params.gamma;
    }
    std::vector<double> events;
    for (double t = draw_exp(lam, rng); t < horizon; t += draw_exp(lam, rng)) events.push_back(t);

    const Matrix& vals = chain->speed_function().values();
    auto v_at = [&](double s) {
      const auto seg = std::upper_bound(times.begin(), times.end(), s) - times.begin() - 1;
      return vals.row(states[std::max<std::ptrdiff_t>(seg, 0)]);
    };

    Vector en = Vector::Zero(d), ed = Vector::Zero(d);
    for (double tau : events) en += v_at(tau).transpose();
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double end = j + 1 < times.size() ? times[j + 1] : horizon;
      ed += lam * (end - times[j]) * vals.row(states[j]).transpose();
    }

    Matrix sn = Matrix::Zero(static_cast<Eigen::Index>(nm), d);
    Matrix sd = Matrix::Zero(static_cast<Eigen::Index>(nm), d);
    for (std::size_t q = 0; q < nm; ++q) {
      const long m = cells[q];
      const double h = horizon / static_cast<double>(m);
      const auto row = static_cast<Eigen::Index>(q);
      for (double tau : events) {
        const long i = std::min(m - 1, static_cast<long>(tau / h));
        sn.row(row) += v_at(static_cast<double>(i) * h);
      }
      for (std::size_t j = 0; j < times.size(); ++j) {
        const long first = static_cast<long>(std::ceil(times[j] / h));
        const long last = j + 1 < times.size() ? static_cast<long>(std::ceil(times[j + 1] / h)) : m;
        const long count = std::max(0L, std::min(last, m) - first);
        sd.row(row) += (lam * h * static_cast<double>(count)) * vals.row(states[j]);
      }
    }
    sum_n[r] = std::move(sn);
    sum_drift[r] = std::move(sd);
    exact_n[r] = std::move(en);
    exact_drift[r] = std::move(ed);
  });

  RiemannReport rep;
  rep.horizon = horizon;
  rep.replicas = R;
  rep.final_mesh = horizon / static_cast<double>(cells.back());
  const double Rd = static_cast<double>(R);
  auto comp = [&](std::size_t r, std::size_t q) -> Eigen::RowVectorXd {
    return sum_n[r].row(static_cast<Eigen::Index>(q)) - sum_drift[r].row(static_cast<Eigen::Index>(q));
  };
  for (std::size_t q = 0; q + 2 < nm; ++q) {
    RiemannRow row;
    row.mesh = horizon / static_cast<double>(cells[q]);
    const auto a = static_cast<Eigen::Index>(q), b = a + 1;
    for (std::size_t r = 0; r < R; ++r) {
      row.l2_next_n += (sum_n[r].row(a) - sum_n[r].row(b)).squaredNorm();
      row.l2_next_drift += (sum_drift[r].row(a) - sum_drift[r].row(b)).squaredNorm();
      row.l2_next_compensated += (comp(r, q) - comp(r, q + 1)).squaredNorm();
    }
    row.l2_next_n = std::sqrt(row.l2_next_n / Rd);
    row.l2_next_drift = std::sqrt(row.l2_next_drift / Rd);
    row.l2_next_compensated = std::sqrt(row.l2_next_compensated / Rd);
    rep.rows.push_back(row);
  }

  const std::size_t f = nm - 1;
  const auto fi = static_cast<Eigen::Index>(f);
  double err_n = 0, err_c = 0, err_d = 0, mag_n = 0, mag_c = 0, mag_d = 0;
  for (std::size_t r = 0; r < R; ++r) {
    const Vector ec = exact_n[r] - exact_drift[r];
    err_n += (sum_n[r].row(fi).transpose() - exact_n[r]).norm();
    err_d += (sum_drift[r].row(fi).transpose() - exact_drift[r]).norm();
    err_c += (comp(r, f).transpose() - ec).norm();
    mag_n += exact_n[r].norm();
    mag_d += exact_drift[r].norm();
    mag_c += ec.norm();
  }
  auto ratio = [](double e, double m) { return m > 0.0 ? e / m : (e > 0.0 ? kInf : 0.0); };
  rep.gap_n = ratio(err_n, mag_n);
  rep.gap_drift = ratio(err_d, mag_d);
  rep.gap_compensated = ratio(err_c, mag_c);

  auto count_inversions = [&](auto field) {
    int n = 0;
    for (std::size_t q = 1; q < rep.rows.size(); ++q)
      if (rep.rows[q].*field > rep.rows[q - 1].*field) ++n;
    return n;
  };
  rep.inversions = std::max({count_inversions(&RiemannRow::l2_next_n), count_inversions(&RiemannRow::l2_next_drift),
                             count_inversions(&RiemannRow::l2_next_compensated)});
  return rep;
}

}  // namespace active
