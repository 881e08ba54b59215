#pragma once

// JSON ingestion for generators, state processes and particle parameters.

#include "active/particle.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace active {

using Json = nlohmann::json;

/// Schema or parse failure in user input; the CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text; syntax errors are reported with line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json load_json_file(const std::string& path);

/// {"rates": [[...]], "labels": [...]}
FiniteGenerator parse_generator(const Json& j);
/// Speed values: [v_1, ..., v_n] or [[v_11, ..., v_1d], ...].
MuFunction parse_speed(const Json& j);
/// {"type": "finite" | "ou1d" | "ou2d" | "circle", ...}
StateProcessModel parse_state_process(const Json& j);
/// {"kappa", "lambda", "gamma", "dim", "variant"}; dim defaults to speed_dim.
ParticleParams parse_particle(const Json& j, Eigen::Index speed_dim);

/// Stable FNV-1a digest of the canonical serialization, as 16 hex digits.
std::string config_hash(const Json& j);

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const StateProcessModel& model);
Json to_json(const ParticleParams& p);

}  // namespace active
