#pragma once

#include <map>
#include <string>
#include <vector>

#include "expphi2/run_config.hpp"
#include "expphi2/stats.hpp"

namespace expphi2 {

/// One statistical verdict: estimate, uncertainty, sample size, and the
/// tolerance it was judged against. No bare booleans.
struct VerdictEntry {
  std::string name;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::int64_t n = 0;
  std::string tolerance;
  bool pass = false;
};

/// Deterministic report body (config snapshot + verdicts) plus timing kept
/// outside the body so identical (config, seed) runs produce bit-identical
/// bodies for any worker count.
struct EnsembleReport {
  std::string task;
  std::map<std::string, std::string> config;
  std::vector<VerdictEntry> entries;
  double wall_seconds = 0.0;
  double replicates_per_second = 0.0;

  bool all_pass() const;
  /// Deterministic part only ("schema_version": 1).
  std::string body_json() const;
  /// Body plus the timing block.
  std::string full_json() const;
  /// CSV table of the verdict entries (header row included).
  std::string entries_csv() const;
};

/// Names accepted by run_ensemble.
const std::vector<std::string>& ensemble_task_names();

/// Distributes replicates over workers (stream_id = replicate index), merges
/// deterministically, and wraps the result in a report. Identical
/// (config, seed) produce identical report bodies for any worker count.
EnsembleReport run_ensemble(const RunConfig& config, const std::string& task);

}  // namespace expphi2
