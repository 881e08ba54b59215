#include "active/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace active {
namespace {

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing required key '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

double number_at(const Json& j, const char* key, const std::string& where) {
  return number(require(j, key, where), where + "." + key);
}

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix number_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(number_list(j[i], where + "[" + std::to_string(i) + "]"));
  const std::size_t cols = rows[0].size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ConfigError(where + ": rows have different lengths");
    for (std::size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

template <class F>
auto wrap(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    // drop the library prefix "[json.exception.parse_error.101] parse error at ..."
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + what);
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

FiniteGenerator parse_generator(const Json& j) {
  const Matrix rates = number_matrix(require(j, "rates", "generator"), "generator.rates");
  std::vector<std::string> labels;
  if (const auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("generator.labels: expected an array of strings");
    for (const auto& l : *it) {
      if (!l.is_string()) throw ConfigError("generator.labels: expected an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return wrap("generator", [&] { return FiniteGenerator(rates, labels); });
}

MuFunction parse_speed(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("speed: expected a non-empty array");
  if (j[0].is_array()) return MuFunction(number_matrix(j, "speed"));
  const std::vector<double> vals = number_list(j, "speed");
  return MuFunction(Vector(Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()))));
}

StateProcessModel parse_state_process(const Json& j) {
  const Json& type = require(j, "type", "state_process");
  if (!type.is_string()) throw ConfigError("state_process.type: expected a string");
  const std::string t = type.get<std::string>();
  const std::string where = "state_process";
  if (t == "finite") {
    const FiniteGenerator gen = parse_generator(j.contains("generator") ? j.at("generator") : j);
    const MuFunction speed = parse_speed(require(j, "speed", where));
    return wrap(where, [&] { return StateProcessModel(FiniteChain(gen, speed)); });
  }
  if (t == "ou1d") {
    const double theta = number_at(j, "theta", where), sigma = number_at(j, "sigma", where);
    return wrap(where, [&] { return StateProcessModel(OrnsteinUhlenbeck1d(theta, sigma)); });
  }
  if (t == "ou2d") {
    const double a = number_at(j, "a", where), sigma = number_at(j, "sigma", where);
    return wrap(where, [&] { return StateProcessModel(OrnsteinUhlenbeck2d(a, sigma)); });
  }
  if (t == "circle") {
    const double a = number_at(j, "a", where), b = number_at(j, "b", where);
    return wrap(where, [&] { return StateProcessModel(CircleBrownian(a, b)); });
  }
  throw ConfigError("state_process.type: unknown type '" + t + "' (expected finite, ou1d, ou2d or circle)");
}

ParticleParams parse_particle(const Json& j, Eigen::Index speed_dim) {
  const std::string where = "particle";
  ParticleParams p;
  p.kappa = number_at(j, "kappa", where);
  p.lambda = number_at(j, "lambda", where);
  p.gamma = number_at(j, "gamma", where);
  p.dim = static_cast<int>(speed_dim);
  if (const auto it = j.find("dim"); it != j.end()) {
    if (!it->is_number_integer()) throw ConfigError("particle.dim: expected an integer");
    p.dim = it->get<int>();
    if (p.dim != speed_dim)
      throw ConfigError("particle.dim: " + std::to_string(p.dim) + " does not match the speed dimension " +
                        std::to_string(speed_dim));
  }
  if (const auto it = j.find("variant"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("particle.variant: expected a string");
    p.variant = wrap("particle.variant", [&] { return parse_variant(it->get<std::string>()); });
  }
  wrap(where, [&] {
    p.validate();
    return 0;
  });
  return p;
}

std::string config_hash(const Json& j) {
  const std::string s = j.dump();  // object keys are sorted, so this is canonical
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const StateProcessModel& model) {
  struct Visitor {
    Json operator()(const FiniteChain& m) const {
      return {{"type", "finite"}, {"rates", to_json(m.generator().rates())},
              {"speed", to_json(m.speed_function().values())}, {"mu", to_json(m.measure().weights())}};
    }
    Json operator()(const OrnsteinUhlenbeck1d& m) const {
      return {{"type", "ou1d"}, {"theta", m.theta()}, {"sigma", m.sigma()}};
    }
    Json operator()(const OrnsteinUhlenbeck2d& m) const {
      return {{"type", "ou2d"}, {"a", m.a()}, {"sigma", m.sigma()}};
    }
    Json operator()(const CircleBrownian& m) const { return {{"type", "circle"}, {"a", m.a()}, {"b", m.b()}}; }
  };
  return std::visit(Visitor{}, model);
}

Json to_json(const ParticleParams& p) {
  return {{"kappa", p.kappa}, {"lambda", p.lambda}, {"gamma", p.gamma}, {"dim", p.dim},
          {"variant", variant_name(p.variant)}};
}

}  // namespace active
