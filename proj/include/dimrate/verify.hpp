#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dimrate/csv.hpp"

namespace dimrate {

struct CheckResult {
  std::string name;
  std::string expected;
  std::string observed;
  std::string tolerance;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool pass() const;
};

struct VerificationReport {
  std::vector<CriterionResult> criteria;
  // Supporting tables (rate-distortion curve, ratio table, prediction
  // variances) keyed by file name.
  std::vector<std::pair<std::string, CsvTable>> artifacts;

  bool pass() const;
  // Columns: criterion, check, expected, observed, tolerance, pass.
  CsvTable table() const;
};

inline constexpr int kCriterionCount = 11;

// Runs one acceptance criterion (1..11); supporting tables are appended to
// `artifacts` when it is non-null.
CriterionResult run_criterion(int id, std::vector<std::pair<std::string, CsvTable>>* artifacts = nullptr);

// Runs the listed criteria in order (all when empty).
VerificationReport run_acceptance_suite(const std::vector<int>& criteria = {});

// "c04 PASS  title  | check: observed (expected, tolerance); ..."
std::string summary_line(const CriterionResult& result);

}  // namespace dimrate
