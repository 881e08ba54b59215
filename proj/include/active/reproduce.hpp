#pragma once

// Canned runs with expected-vs-computed tables. The acceptance suite and the
// `reproduce` CLI command share these code paths.

#include "active/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace active {

enum class Relation {
  absolute,  // |computed - expected| <= tolerance
  relative,  // |computed - expected| <= tolerance * |expected|
  at_most,   // computed <= expected + tolerance
  at_least,  // computed >= expected - tolerance
};
const char* relation_name(Relation r);

struct ReportRow {
  std::string label;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::absolute;
  bool pass = false;
  std::string note;
};

ReportRow make_row(std::string label, double expected, double computed, double tolerance,
                   Relation relation = Relation::absolute, std::string note = {});

struct Report {
  std::string id;
  std::string title;
  std::vector<ReportRow> rows;
  double seconds = 0.0;
  bool pass() const;
};

struct ReproduceOptions {
  std::uint64_t seed = 0x5eed2024ULL;
  unsigned threads = 0;
  /// Ten times fewer replicas and random instances; tolerances are unchanged.
  bool quick = false;
};

/// Ids accepted by reproduce(): the worked examples plus "acceptance".
const std::vector<std::string>& example_ids();
/// Throws std::invalid_argument for an unknown id.
Report reproduce(const std::string& id, const ReproduceOptions& options = {});

inline constexpr int kAcceptanceCriteria = 10;
/// Criterion k in [1, 10]; one report per criterion.
Report acceptance_criterion(int k, const ReproduceOptions& options = {});

Json to_json(const Report& report);
std::string format_table(const Report& report);
std::string to_csv(const Report& report);

}  // namespace active
