#pragma once

// Numbered acceptance criteria grouped into named batteries.  Each criterion
// returns its statistics as JSON so that reruns can be compared exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "pathscape/record.hpp"

namespace pathscape {

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  Json stats = Json::object();  // deterministic given the seed; no timing
  double seconds = 0.0;
  double time_limit = 0.0;      // seconds; part of the pass condition
};

/// Battery names in display order, "all" last.
std::vector<std::string> battery_names();
/// Criterion ids in a battery.  Throws DomainError for unknown names.
std::vector<int> battery_criteria(const std::string& battery);

/// Criteria 1 .. 12.
CriterionResult run_criterion(int id, const VerifyOptions& options);

/// Criterion 13: reruns every criterion in `first` with the same seed and a
/// different thread count and compares the statistics byte for byte.
CriterionResult reproducibility_check(const std::vector<CriterionResult>& first, const VerifyOptions& options);

/// Runs the battery; "all" also runs criterion 13 against its own results.
std::vector<CriterionResult> run_battery(const std::string& battery, const VerifyOptions& options);

/// "[PASS] C<id> <title> (<seconds>s)" style line.
std::string format_result(const CriterionResult& r);

}  // namespace pathscape
