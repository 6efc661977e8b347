#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsplit/scenarios.hpp"

namespace rsplit {

struct VerifyConfig {
  std::vector<std::string> suites;  // empty: all
  std::uint64_t seed = 1;
  int points = 100;
  std::optional<double> tol;             // overrides every tolerance
  std::map<std::string, double> suite_tol;  // overrides per suite
  ScenarioParams params;
  bool parallel = true;
};

struct CheckRecord {
  std::string suite, id, anchor;
  double residual = 0, tol = 0;
  bool pass = false;
  double wall_ms = 0;
  std::string note;
};

struct Report {
  std::vector<CheckRecord> records;
  bool pass() const;
  // Machine-readable report; timing fields are omitted when with_timing is false.
  std::string to_json(const VerifyConfig& c, bool with_timing = true) const;
  std::string to_text() const;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& s);

// Throws std::invalid_argument for unknown suites.
std::vector<CheckRecord> run_suite(const std::string& suite, const VerifyConfig& c);
Report run_verify(const VerifyConfig& c);

// One entry per implemented equation: the dimensions of its summands.
struct DimsRecord {
  std::string id;
  std::vector<Dimension> terms;
  bool pass;
};
std::vector<DimsRecord> dims_audit(std::uint64_t seed = 1);
// Builds a residual with a deliberately mismatched summand; true when the
// mismatch is reported.
bool dims_injection_detected();

}  // namespace rsplit
