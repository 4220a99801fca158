#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qell {

struct SelftestOptions {
  double tol = 1e-10;
  /// Runs only the named suite when set.
  std::optional<std::string> suite;
  int draws = 20;
  unsigned seed = 2024;
  /// Test hook: flips the sign of the first coefficient of the contiguous
  /// relation, so the contiguous suite must fail.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  int checked = 0;
  int skipped = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// contiguous, qshift, symmetry, inversion, base_change, quasi_periodicity,
/// residues.
std::vector<std::string> suite_names();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<SuiteResult> run_selftest(const SelftestOptions& opt);

bool all_passed(const std::vector<SuiteResult>& results);

/// Fixed-width pass/fail table.
void write_report(std::ostream& os, const std::vector<SuiteResult>& results);

}  // namespace qell
