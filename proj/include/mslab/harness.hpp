#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mslab/serialize.hpp"

namespace mslab {

inline constexpr std::string_view kReportSchema = "modelspace-lab/1";

enum class Suite { commutant, bicommutant, smirnov, lemma_embed, jordan, theta_formula, blowup };

std::string_view to_string(Suite s);
Suite suite_from_string(std::string_view name);
const std::vector<std::string>& suite_names();

struct Scenario {
  Suite suite = Suite::commutant;
  std::uint64_t seed = 1;
  int degree_cap = 8;
  int n_cap = 3;
  int instance_count = 20;
  Tolerances tol;
  /// Worker threads; does not affect report contents.
  int jobs = 1;

  /// Throws invalid_input unless 1 <= degree_cap <= 12, 1 <= n_cap <= 3 and
  /// instance_count >= 1.
  void validate() const;
  Json to_json() const;
  static Scenario from_json(const Json& j);
};

/// Serialized instance; a deterministic function of (seed, suite, caps, index).
Json generate_instance(const Scenario& s, int index);

/// Runs the suite's checks on a serialized instance and returns the record:
/// {index, status, instance, measurements, failures[, error]}. Status is
/// "pass", "fail", "inconclusive" (no witness found) or "rejected" (the
/// instance could not be realized numerically).
Json check_instance(const Scenario& s, int index, const Json& instance);

struct Report {
  Scenario scenario;
  std::vector<Json> records;  // sorted by index
  std::vector<Json> notes;    // erratum candidates and other findings

  int count(std::string_view status) const;
  bool hard_failure() const { return count("fail") > 0; }
  Json summary() const;
  Json to_json() const;
};

Report run_suite(const Scenario& s);

/// Writes canonical JSON; throws ErrorKind::io when the file cannot be written.
void emit_report(const Report& r, const std::string& path);
Json load_report(const std::string& path);

struct ReplayResult {
  Json record;
  /// Status and measurements are byte-identical to the stored record.
  bool identical = false;
};

ReplayResult replay(const Json& report, int index);

}  // namespace mslab
