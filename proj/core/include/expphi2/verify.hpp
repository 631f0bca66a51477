#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace expphi2 {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double elapsed_seconds = 0.0;
  std::vector<std::string> details;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
  std::string to_json() const;  // schema_version 1; timing in a separate block
  /// One line per criterion: "[PASS] 3 wick-mean-one (12.3s): ..."
  std::string summary_lines() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20260810;
  int workers = 2;
  std::string out_dir;         // when nonempty: report.json + tables/*.csv
  std::vector<int> only;       // run a subset of criterion ids (empty = all)
  bool dry_run = false;        // print the plan, no compute
};

/// The planned task list (criterion id, name, scale) for --dry-run.
std::vector<std::string> verify_plan();

/// Runs the acceptance criteria at desk scale. Exit contract: all_pass().
VerifyReport verify_all(const VerifyOptions& options);

}  // namespace expphi2
