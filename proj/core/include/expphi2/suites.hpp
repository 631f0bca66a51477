#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "expphi2/ensemble.hpp"
#include "expphi2/functionals.hpp"
#include "expphi2/gff.hpp"
#include "expphi2/gmc.hpp"
#include "expphi2/run_config.hpp"

namespace expphi2 {

// ---------------------------------------------------------------------------
// Integration-by-parts residual
// ---------------------------------------------------------------------------

struct IbpResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;                // mean(lhs_i - rhs_i)
  double stderr_ = 0.0;                 // stderr of the paired difference
  double residual_stderr_units = 0.0;   // standardized residual
  std::int64_t n = 0;
};

/// Monte Carlo check of the finite-N integration-by-parts identity for the
/// tilted measure, both sides weighted by w = exp(-total mass) on a common
/// sample set:
///   lhs_i = (D_H F(phi), h) w(phi)
///   rhs_i = F(phi) (<phi,(1-lap)h> + alpha <exp_N(alpha phi), P_N h>) w(phi)
IbpResult ibp_residual(const RunConfig& config, const CylinderFunctional& functional,
                       const RealConsElement& direction);

// ---------------------------------------------------------------------------
// Initial-measure samplers for the stationarity suite
// ---------------------------------------------------------------------------

enum class InitSampler { importance, pcn };

struct InitialEnsemble {
  std::vector<SpectralCoeffs> fields;
  double effective_sample_size = 0.0;  // importance: ESS of the weight pool
  double pcn_acceptance = 0.0;         // pcn: mean acceptance rate
};

/// The spec'd sampler: K candidates from mu_0, weights exp(-total mass),
/// systematic resampling. Throws EffectiveSampleTooSmall when ESS < 100.
InitialEnsemble importance_resample_initials(const RunConfig& config, std::size_t count);

/// Exact-MCMC alternative: preconditioned Crank-Nicolson chains targeting the
/// same grid Gibbs measure e^{-mass} d mu_0, one independent chain per
/// replicate. Used where the importance weights are too degenerate (large
/// alpha); see the ledger note on weight variance.
InitialEnsemble pcn_initials(const RunConfig& config, std::size_t count, int burn_in_steps = 400,
                             double proposal_beta = 0.12);

/// Evolves an initial ensemble from the tilted measure under direct_expsqe2
/// and compares the functional marginals at times {0, T/2, T} by two-sample
/// KS tests on disjoint replicate halves, Holm-Bonferroni at p < 0.001.
EnsembleReport stationarity_suite(const RunConfig& config,
                                  const std::vector<CylinderFunctional>& functionals,
                                  InitSampler init = InitSampler::importance);

// ---------------------------------------------------------------------------
// psi-independence
// ---------------------------------------------------------------------------

/// Coupled comparison of Wick exponentials built from the same field with
/// different multipliers: per test function, E<f, M_n^{psi1} - M_n^{psi2}>
/// and its trend over n; passes when the difference shrinks with n and the
/// final level is consistent with 0 at 3 stderr.
EnsembleReport psi_independence_suite(const RunConfig& config,
                                      const std::vector<MultiplierSpec>& specs,
                                      const std::vector<TorusField>& test_functions);

}  // namespace expphi2
