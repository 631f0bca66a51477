#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "expphi2/gmc.hpp"
#include "expphi2/multiplier.hpp"
#include "expphi2/solver.hpp"

namespace expphi2 {

/// Flat key-value run configuration; one knob per line in "key = value" text,
/// '#' comments. Parsing is strict: unknown keys and malformed values raise
/// ConfigInvalid naming the offender, and charge-parameter windows are
/// re-validated before any compute.
struct RunConfig {
  int grid = 256;
  double alpha = 0.0;
  double p = 1.5;
  double beta = 0.3;
  std::string multiplier = "sharp_square";
  std::vector<int> n_levels = {3};
  double dt = 1e-2;
  double horizon = 1.0;
  std::int64_t ensemble = 1000;
  std::uint64_t seed = 0;
  std::string scheme = "split";
  double clamp_threshold = 700.0;
  std::string out_dir = ".";
  std::vector<std::string> reports = {};
  int workers = 1;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;

  void validate() const;

  ChargeParams charge_params() const { return ChargeParams::create(alpha, p, beta); }
  MultiplierSpec multiplier_spec() const { return MultiplierSpec::parse(multiplier); }
  SolverScheme solver_scheme() const { return solver_scheme_from_string(scheme); }

  bool operator==(const RunConfig&) const = default;
};

/// Documented key list (used by --help and the config round-trip test).
const std::vector<std::string>& run_config_keys();

}  // namespace expphi2
