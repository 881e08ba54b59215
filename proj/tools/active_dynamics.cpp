// Command-line front end: simulate, diffusion, ldp, two-state, compare, reproduce.
//
// Exit codes: 0 success, 1 invalid input (usage, schema, malformed JSON),
// 2 numerical failure, 3 a reproduction check failed.

#include "active/config.hpp"
#include "active/diffusion.hpp"
#include "active/large_deviations.hpp"
#include "active/reproduce.hpp"
#include "active/reversibility.hpp"
#include "active/two_state.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef ACTIVE_DYNAMICS_VERSION
#define ACTIVE_DYNAMICS_VERSION "unknown"
#endif

namespace {

using namespace active;

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheckFailed = 3;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_dir;
  std::string format;
};

unsigned effective_threads(const Globals& g) {
  if (g.threads) return *g.threads;
  if (const char* env = std::getenv("ACTIVE_DYNAMICS_THREADS")) {
    try {
      std::size_t used = 0;
      const long n = std::stol(env, &used);
      if (used != std::string(env).size() || n < 0) throw std::invalid_argument("");
      return static_cast<unsigned>(n);
    } catch (const std::exception&) {
      throw ConfigError("ACTIVE_DYNAMICS_THREADS must be a non-negative integer, got '" + std::string(env) + "'");
    }
  }
  return 0;
}

Json load_config(const Globals& g, bool required) {
  if (g.config_path.empty()) {
    if (required) throw ConfigError("this command needs --config <path>");
    return Json::object();
  }
  Json j = load_json_file(g.config_path);
  if (!j.is_object()) throw ConfigError(g.config_path + ": top level must be an object");
  return j;
}

std::uint64_t effective_seed(const Globals& g, const Json& config) {
  if (g.seed) return *g.seed;
  if (const auto it = config.find("seed"); it != config.end()) {
    if (!it->is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    return it->get<std::uint64_t>();
  }
  return 1;
}

Json meta(const std::string& command, const Json& effective, std::uint64_t seed, unsigned threads) {
  return {{"command", command},
          {"version", ACTIVE_DYNAMICS_VERSION},
          {"seed", seed},
          {"threads", threads},
          {"config_hash", config_hash(effective)}};
}

/// Writes to <out>/<name> when --out is given, stdout otherwise.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  std::cerr << "wrote " << path.string() << '\n';
}

std::string format_or(const Globals& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  return f;
}

/// "a,b,c" or "start:stop:step".
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  std::vector<double> out;
  const auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(flag + ": cannot parse '" + s + "' as a number");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError(flag + ": expected start:stop:step");
    const double a = to_double(parts[0]), b = to_double(parts[1]), h = to_double(parts[2]);
    if (!(h > 0.0) || b < a) throw ConfigError(flag + ": need step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    if (n > 100000) throw ConfigError(flag + ": too many grid points");
    for (long i = 0; i <= n; ++i) out.push_back(a + h * static_cast<double>(i));
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  }
  if (out.empty()) throw ConfigError(flag + ": empty grid");
  return out;
}

struct Model {
  StateProcessModel process;
  ParticleParams params;
};

Model load_model(const Json& config) {
  if (!config.contains("state_process")) throw ConfigError("config: missing required key 'state_process'");
  if (!config.contains("particle")) throw ConfigError("config: missing required key 'particle'");
  StateProcessModel process = parse_state_process(config.at("state_process"));
  ParticleParams params = parse_particle(config.at("particle"), speed_dim(process));
  return {std::move(process), params};
}

const FiniteChain& require_finite(const Model& m, const std::string& command) {
  const auto* chain = std::get_if<FiniteChain>(&m.process);
  if (!chain) throw ConfigError(command + " needs state_process.type = \"finite\"");
  return *chain;
}

double positive_number(const Json& config, const char* key, std::optional<double> cli, double fallback) {
  if (cli) {
    if (!(*cli > 0.0)) throw ConfigError(std::string("--") + key + " must be positive");
    return *cli;
  }
  if (const auto it = config.find(key); it != config.end()) {
    if (!it->is_number() || !(it->get<double>() > 0.0)) throw ConfigError(std::string(key) + ": expected a positive number");
    return it->get<double>();
  }
  return fallback;
}

Json estimates(const std::vector<std::vector<Estimate>>& table, double scale) {
  Json rows = Json::array();
  for (const auto& row : table) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back({{"value", e.value * scale}, {"se", e.se * scale}});
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::optional<double> horizon;
  std::optional<double> replicas;
  bool no_parts = false;
};

int run_simulate(const Globals& g, const SimulateArgs& a) {
  Json config = load_config(g, true);
  const Model m = load_model(config);
  const double horizon = positive_number(config, "horizon", a.horizon, 10.0);
  const auto replicas = static_cast<std::size_t>(positive_number(config, "replicas", a.replicas, 1000.0));
  if (replicas < 3) throw ConfigError("replicas: need at least 3");
  const std::uint64_t seed = effective_seed(g, config);
  const unsigned threads = effective_threads(g);
  SimulationOptions opt;
  opt.track_parts = !a.no_parts;
  opt.threads = threads;

  Json effective = {{"state_process", to_json(m.process)}, {"particle", to_json(m.params)}, {"horizon", horizon},
                    {"replicas", replicas}, {"track_parts", opt.track_parts}};
  const Json head = meta("simulate", effective, seed, threads);
  const std::string fmt = format_or(g, "json");

  if (fmt == "csv" || !g.out_dir.empty()) {
    const Trajectory t = simulate(m.process, m.params, horizon, replica_seed(seed, 0), opt);
    std::ostringstream csv;
    csv << std::setprecision(17) << "# " << head.dump() << "\nt";
    for (int k = 0; k < m.params.dim; ++k) csv << ",x_" << k + 1;
    csv << ",part\n";
    for (const auto& pt : t.points) {
      csv << pt.t;
      for (Eigen::Index k = 0; k < pt.x.size(); ++k) csv << ',' << pt.x(k);
      csv << ',' << event_kind_name(pt.kind) << '\n';
    }
    emit(g, "trajectory.csv", csv.str());
    if (fmt == "csv" && g.out_dir.empty()) return 0;
  }

  const MomentEstimate est = estimate_moments(m.process, m.params, horizon, replicas, seed, opt);
  Json out = {{"meta", head}, {"config", effective}};
  Json mean = Json::array();
  for (const auto& e : est.mean) mean.push_back({{"value", e.value}, {"se", e.se}});
  out["mean"] = mean;
  out["covariance_rate"] = estimates(est.covariance, 1.0 / horizon);
  if (est.has_parts) {
    out["parts_rate"] = {{"walk", estimates(est.walk, 1.0 / horizon)},
                         {"martingale", estimates(est.martingale, 1.0 / horizon)},
                         {"active", estimates(est.active, 1.0 / horizon)},
                         {"walk_martingale", estimates(est.walk_martingale, 1.0 / horizon)},
                         {"walk_active", estimates(est.walk_active, 1.0 / horizon)},
                         {"martingale_active", estimates(est.martingale_active, 1.0 / horizon)}};
    if (m.params.variant == Variant::lattice)
      out["quadratic_variation_ratio"] = {{"value", est.qv_ratio.value}, {"se", est.qv_ratio.se}};
  }
  emit(g, "simulate.json", out.dump(2));
  return 0;
}

// ---------------------------------------------------------------- diffusion

Json report_json(const DiffusionReport& d) {
  return {{"method", method_name(d.method)}, {"walk", to_json(d.walk)},     {"martingale", to_json(d.martingale)},
          {"active", to_json(d.active)},     {"total", to_json(d.total)},   {"drift", to_json(d.drift)}};
}

int run_diffusion(const Globals& g, const std::string& method) {
  const Json config = load_config(g, true);
  const Model m = load_model(config);
  std::vector<DiffusionReport> reports;
  if (method == "generator" || method == "both") {
    if (const auto* chain = std::get_if<FiniteChain>(&m.process)) reports.push_back(diffusion_finite(*chain, m.params));
    else reports.push_back(diffusion_closed_form(m.process, m.params));
  }
  if (method == "green-kubo" || method == "both") reports.push_back(diffusion_green_kubo(m.process, m.params));

  const Json effective = {{"state_process", to_json(m.process)}, {"particle", to_json(m.params)}, {"method", method}};
  const Json head = meta("diffusion", effective, effective_seed(g, config), effective_threads(g));
  if (format_or(g, "json") == "csv") {
    std::ostringstream csv;
    csv << std::setprecision(17) << "method,i,j,walk,martingale,active,total\n";
    for (const auto& d : reports)
      for (Eigen::Index i = 0; i < d.total.rows(); ++i)
        for (Eigen::Index j = 0; j < d.total.cols(); ++j)
          csv << method_name(d.method) << ',' << i + 1 << ',' << j + 1 << ',' << d.walk(i, j) << ','
              << d.martingale(i, j) << ',' << d.active(i, j) << ',' << d.total(i, j) << '\n';
    emit(g, "diffusion.csv", csv.str());
    return 0;
  }
  Json out = {{"meta", head}, {"config", effective}, {"reports", Json::array()}};
  for (const auto& d : reports) out["reports"].push_back(report_json(d));
  if (reports.size() == 2) out["max_abs_difference"] = (reports[0].total - reports[1].total).cwiseAbs().maxCoeff();
  emit(g, "diffusion.json", out.dump(2));
  return 0;
}

// ---------------------------------------------------------------- ldp

struct LdpArgs {
  std::string alpha_grid = "-2:2:0.5";
  std::string x_grid;
  std::string method = "eig";
  bool dominance = false;
};

int run_ldp(const Globals& g, const LdpArgs& a) {
  const Json config = load_config(g, true);
  const Model m = load_model(config);
  const FiniteChain& chain = require_finite(m, "ldp");
  const auto& gen = chain.generator();
  const auto& mu = chain.measure();
  const auto& v = chain.speed_function();
  const Eigen::Index d = v.dim();
  // grid values act along the diagonal direction (1, ..., 1) when d > 1
  const auto point = [d](double s) { return Vector::Constant(d, s); };
  std::vector<Vector> alphas, xs;
  for (double s : parse_grid(a.alpha_grid, "--alpha-grid")) alphas.push_back(point(s));
  if (!a.x_grid.empty())
    for (double s : parse_grid(a.x_grid, "--x-grid")) xs.push_back(point(s));

  std::vector<FreeEnergyMethod> methods;
  if (a.method == "eig" || a.method == "both") methods.push_back(FreeEnergyMethod::eigenvalue);
  if (a.method == "var" || a.method == "both") methods.push_back(FreeEnergyMethod::variational);

  const Json effective = {{"state_process", to_json(m.process)}, {"particle", to_json(m.params)},
                          {"alpha_grid", a.alpha_grid},          {"x_grid", a.x_grid},
                          {"method", a.method},                  {"dominance", a.dominance}};
  const Json head = meta("ldp", effective, effective_seed(g, config), effective_threads(g));

  std::vector<FreeEnergySamples> f;
  for (auto meth : methods) f.push_back(sample_free_energy(gen, mu, v, m.params, alphas, meth));
  RateFunctionSamples rate;
  if (!xs.empty()) rate = sample_rate_function(make_free_energy(gen, mu, v, m.params), xs);
  std::optional<DominanceReport> dom;
  if (a.dominance) dom = dominance_check(gen, mu, v, m.params, alphas, xs);

  if (format_or(g, "json") == "csv") {
    std::ostringstream csv;
    csv << std::setprecision(17) << "quantity,method,s,value\n";
    for (const auto& fs : f)
      for (std::size_t i = 0; i < alphas.size(); ++i)
        csv << "F," << method_name(fs.method) << ',' << alphas[i](0) << ',' << fs.values[i] << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) csv << "I,legendre," << xs[i](0) << ',' << rate.values[i] << '\n';
    if (dom) {
      for (std::size_t i = 0; i < alphas.size(); ++i) csv << "F,symmetric," << alphas[i](0) << ',' << dom->f_sym[i] << '\n';
      for (std::size_t i = 0; i < xs.size(); ++i) csv << "I,symmetric," << xs[i](0) << ',' << dom->i_sym[i] << '\n';
    }
    emit(g, "ldp.csv", csv.str());
    return 0;
  }
  const auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json("inf"); };
  Json out = {{"meta", head}, {"config", effective}};
  Json fe = Json::array();
  for (const auto& fs : f) {
    Json vals = Json::array();
    for (double x : fs.values) vals.push_back(num(x));
    fe.push_back({{"method", method_name(fs.method)}, {"values", vals}});
  }
  Json grid_a = Json::array(), grid_x = Json::array(), ivals = Json::array();
  for (const auto& al : alphas) grid_a.push_back(to_json(al));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    grid_x.push_back(to_json(xs[i]));
    ivals.push_back(num(rate.values[i]));
  }
  out["alpha"] = grid_a;
  out["free_energy"] = fe;
  out["x"] = grid_x;
  out["rate_function"] = ivals;
  if (dom) {
    Json fsym = Json::array(), isym = Json::array();
    for (double x : dom->f_sym) fsym.push_back(num(x));
    for (double x : dom->i_sym) isym.push_back(num(x));
    out["dominance"] = {{"free_energy_symmetric", fsym},
                        {"rate_function_symmetric", isym},
                        {"worst_free_energy", num(dom->worst_free_energy)},
                        {"worst_rate", num(dom->worst_rate)},
                        {"holds", dom->holds}};
  }
  emit(g, "ldp.json", out.dump(2));
  return 0;
}

// ---------------------------------------------------------------- two-state

struct TwoStateArgs {
  std::optional<double> kappa, lambda, gamma, alpha0;
  std::vector<double> sqz;
  std::vector<double> mgf;
  std::optional<double> free_energy;
  bool scaling = false;
};

int run_two_state(const Globals& g, const TwoStateArgs& a) {
  const Json config = load_config(g, false);
  TwoStateParams p;
  if (const auto it = config.find("two_state"); it != config.end()) {
    if (!it->is_object()) throw ConfigError("two_state: expected an object");
    const auto get = [&](const char* k, double& dst) {
      if (const auto f = it->find(k); f != it->end()) {
        if (!f->is_number()) throw ConfigError(std::string("two_state.") + k + ": expected a number");
        dst = f->get<double>();
      }
    };
    get("kappa", p.kappa);
    get("lambda", p.lambda);
    get("gamma", p.gamma);
    get("alpha0", p.alpha0);
  }
  if (a.kappa) p.kappa = *a.kappa;
  if (a.lambda) p.lambda = *a.lambda;
  if (a.gamma) p.gamma = *a.gamma;
  if (a.alpha0) p.alpha0 = *a.alpha0;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("two_state: ") + e.what());
  }

  const Json params = {{"kappa", p.kappa}, {"lambda", p.lambda}, {"gamma", p.gamma}, {"alpha0", p.alpha0}};
  Json effective = {{"two_state", params}};
  Json out = {{"params", params}, {"diffusion_constant", diffusion_constant(p)}};
  std::ostringstream csv;
  csv << std::setprecision(17);
  const bool want_csv = format_or(g, "json") == "csv";
  if (!a.sqz.empty()) {
    if (!(a.sqz[1] > 0.0)) throw ConfigError("--sqz: z must be positive");
    const Complex s = fourier_laplace(p, a.sqz[0], a.sqz[1]);
    out["S"] = {{"q", a.sqz[0]}, {"z", a.sqz[1]}, {"re", s.real()}, {"im", s.imag()}};
    effective["sqz"] = a.sqz;
    csv << "quantity,arg1,arg2,re,im\nS," << a.sqz[0] << ',' << a.sqz[1] << ',' << s.real() << ',' << s.imag() << '\n';
  }
  if (!a.mgf.empty()) {
    if (!(a.mgf[1] >= 0.0)) throw ConfigError("--mgf: t must be non-negative");
    const double lm = log_mgf(p, a.mgf[0], a.mgf[1]);
    out["mgf"] = {{"alpha", a.mgf[0]}, {"t", a.mgf[1]}, {"log_value", lm}, {"value", std::exp(lm)}};
    effective["mgf"] = a.mgf;
    csv << "mgf,alpha,t,log_value\nmgf," << a.mgf[0] << ',' << a.mgf[1] << ',' << lm << '\n';
  }
  if (a.free_energy) {
    const double f = free_energy_closed(p, *a.free_energy);
    out["free_energy"] = {{"alpha", *a.free_energy},
                          {"value", f},
                          {"continuum_limit", continuum_limit_free_energy(p, *a.free_energy)}};
    effective["free_energy"] = *a.free_energy;
    csv << "free_energy,alpha,value\nF," << *a.free_energy << ',' << f << '\n';
  }
  if (a.scaling) {
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4}, qs = {0.5, 1.0, 2.0}, zs = {0.1, 1.0, 4.0};
    Json rows = Json::array();
    csv << "eps,q,z,re,im,limit,rel_error\n";
    for (const auto& r : scaling_check(p, eps, qs, zs)) {
      rows.push_back({{"eps", r.eps}, {"q", r.q}, {"z", r.z}, {"re", r.value.real()}, {"im", r.value.imag()},
                      {"limit", r.limit}, {"rel_error", r.rel_error}});
      csv << r.eps << ',' << r.q << ',' << r.z << ',' << r.value.real() << ',' << r.value.imag() << ',' << r.limit
          << ',' << r.rel_error << '\n';
    }
    out["scaling_check"] = rows;
    effective["scaling_check"] = true;
  }
  out["meta"] = meta("two-state", effective, effective_seed(g, config), effective_threads(g));
  if (want_csv) emit(g, "two_state.csv", csv.str());
  else emit(g, "two_state.json", out.dump(2));
  return 0;
}

// ---------------------------------------------------------------- compare

int run_compare(const Globals& g) {
  const Json config = load_config(g, true);
  const Model m = load_model(config);
  const FiniteChain& chain = require_finite(m, "compare");
  const ComparisonReport r = compare_to_reversible(chain.generator(), chain.measure(), chain.speed_function());
  const Json effective = {{"state_process", to_json(m.process)}};
  Json out = {{"meta", meta("compare", effective, effective_seed(g, config), effective_threads(g))},
              {"generator", to_json(r.generator)},
              {"symmetric_part", to_json(r.symmetric)},
              {"poisson_form", to_json(r.active)},
              {"poisson_form_symmetric", to_json(r.active_symmetric)},
              {"gap", to_json(r.gap)},
              {"min_gap_eigenvalue", r.min_gap_eigenvalue},
              {"max_gap_magnitude", r.max_gap_magnitude},
              {"reversible", r.reversible},
              {"dominated", r.dominated}};
  if (chain.dim() == 1) {
    const TaylorCheck t = taylor_check(chain.generator(), chain.measure(), chain.speed_function().column(0));
    out["taylor"] = {{"form", t.form},
                     {"symmetric_form", t.symmetric_form},
                     {"correction", t.correction},
                     {"c_norm", t.c_norm},
                     {"series_converges", t.series_converges}};
  }
  emit(g, "compare.json", out.dump(2));
  return 0;
}

// ---------------------------------------------------------------- reproduce

int run_reproduce(const Globals& g, const std::string& id, bool quick) {
  ReproduceOptions o;
  o.seed = g.seed.value_or(o.seed);
  o.threads = effective_threads(g);
  o.quick = quick;
  if (std::find(example_ids().begin(), example_ids().end(), id) == example_ids().end()) {
    std::string known;
    for (const auto& k : example_ids()) known += " " + k;
    throw ConfigError("unknown example id '" + id + "'; known:" + known);
  }
  const Report r = reproduce(id, o);
  const std::string fmt = format_or(g, "table");
  if (fmt == "json") {
    Json out = to_json(r);
    out["meta"] = meta("reproduce", {{"id", id}, {"quick", quick}}, o.seed, o.threads);
    emit(g, "reproduce_" + id + ".json", out.dump(2));
  } else if (fmt == "csv") {
    emit(g, "reproduce_" + id + ".csv", to_csv(r));
  } else {
    emit(g, "reproduce_" + id + ".txt", format_table(r));
  }
  return r.pass() ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active particle dynamics: simulation, diffusion constants, large deviations"};
  app.set_version_flag("--version", ACTIVE_DYNAMICS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--seed", g.seed, "master seed (overrides the config)");
  app.add_option("--threads", g.threads, "worker threads; 0 = all cores (env ACTIVE_DYNAMICS_THREADS)");
  app.add_option("--out", g.out_dir, "write artifacts into this directory instead of stdout");
  app.add_option("--format", g.format, "json | csv (reproduce also accepts table)")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo moments and a sample trajectory");
  simulate_cmd->add_option("--horizon", sim.horizon, "time horizon T");
  simulate_cmd->add_option("--replicas", sim.replicas, "number of replicas");
  simulate_cmd->add_flag("--no-parts", sim.no_parts, "skip the walk / martingale / active split");

  std::string diff_method = "both";
  auto* diffusion_cmd = app.add_subcommand("diffusion", "limiting covariance rate");
  diffusion_cmd->add_option("--method", diff_method, "generator | green-kubo | both")
      ->check(CLI::IsMember({"generator", "green-kubo", "both"}));

  LdpArgs ldp;
  auto* ldp_cmd = app.add_subcommand("ldp", "free energy and rate function (finite chains)");
  ldp_cmd->add_option("--alpha-grid", ldp.alpha_grid, "a,b,c or start:stop:step");
  ldp_cmd->add_option("--x-grid", ldp.x_grid, "a,b,c or start:stop:step");
  ldp_cmd->add_option("--method", ldp.method, "eig | var | both")->check(CLI::IsMember({"eig", "var", "both"}));
  ldp_cmd->add_flag("--dominance", ldp.dominance, "compare with the reversible part");

  TwoStateArgs ts;
  auto* two_cmd = app.add_subcommand("two-state", "explicit two-state model");
  two_cmd->add_option("--kappa", ts.kappa);
  two_cmd->add_option("--lambda", ts.lambda);
  two_cmd->add_option("--gamma", ts.gamma);
  two_cmd->add_option("--alpha0", ts.alpha0, "probability of the +1 initial velocity");
  two_cmd->add_option("--sqz", ts.sqz, "Fourier-Laplace transform at q z")->expected(2);
  two_cmd->add_option("--mgf", ts.mgf, "moment generating function at alpha t")->expected(2);
  two_cmd->add_option("--free-energy", ts.free_energy, "free energy at alpha");
  two_cmd->add_flag("--scaling-check", ts.scaling, "diffusive scaling ladder");

  auto* compare_cmd = app.add_subcommand("compare", "compare a finite chain with its reversible part");

  std::string example;
  bool quick = false;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run a canned example with a pass/fail table");
  reproduce_cmd->add_option("id", example, "example id")->required();
  reproduce_cmd->add_flag("--quick", quick, "ten times fewer replicas");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*simulate_cmd) return run_simulate(g, sim);
    if (*diffusion_cmd) return run_diffusion(g, diff_method);
    if (*ldp_cmd) return run_ldp(g, ldp);
    if (*two_cmd) return run_two_state(g, ts);
    if (*compare_cmd) return run_compare(g);
    if (*reproduce_cmd) return run_reproduce(g, example, quick);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
