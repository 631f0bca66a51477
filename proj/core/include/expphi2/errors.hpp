#pragma once

#include <stdexcept>
#include <string>

namespace expphi2 {

// Typed failures. Each names the contract it guards so callers can react
// (retry at a finer grid, reject a config, flag a degenerate estimator).

struct SymmetryViolation : std::runtime_error {
  explicit SymmetryViolation(const std::string& what) : std::runtime_error(what) {}
};

struct BlockAboveNyquist : std::runtime_error {
  explicit BlockAboveNyquist(const std::string& what) : std::runtime_error(what) {}
};

struct LevelAboveNyquist : std::runtime_error {
  explicit LevelAboveNyquist(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidHorizon : std::runtime_error {
  explicit InvalidHorizon(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateRegression : std::runtime_error {
  explicit DegenerateRegression(const std::string& what) : std::runtime_error(what) {}
};

struct BlowUp : std::runtime_error {
  explicit BlowUp(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigInvalid : std::runtime_error {
  explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};

struct EffectiveSampleTooSmall : std::runtime_error {
  explicit EffectiveSampleTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct NonpositiveRadius : std::runtime_error {
  explicit NonpositiveRadius(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace expphi2
