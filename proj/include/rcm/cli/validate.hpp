#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace rcm {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0;      // worst observed defect, or worst slack for inequalities
  double tolerance = 0;
  std::size_t cases = 0;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct ValidationReport {
  int schema_version = 1;
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json() const;
  static ValidationReport from_json(const nlohmann::json& j);
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

struct ValidateOptions {
  uint64_t seed = 1;
  bool inject_fault = false;  // corrupts one kernel row before the detailed-balance check
};

// Deterministic identity and inequality checks across the env, walk and kernel modules.
ValidationReport validate_suite(const ValidateOptions& o = {});

}  // namespace rcm
