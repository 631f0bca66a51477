#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "expphi2/gff.hpp"
#include "expphi2/grid.hpp"
#include "expphi2/multiplier.hpp"
#include "expphi2/norms.hpp"
#include "expphi2/rng.hpp"
#include "expphi2/stats.hpp"

namespace expphi2 {

/// Charge parameter triple (alpha, p, beta) with the admissible windows
///   |alpha| < sqrt(8 pi),
///   p in (1, min(8 pi / alpha^2, 2)),
///   beta in (alpha^2 (p-1) / 4 pi, 2 (p-1) / p),
/// all strict. alpha = 0 is allowed (p, beta windows then only require
/// p in (1,2), beta in (0, 2(p-1)/p)).
struct ChargeParams {
  double alpha = 0.0;
  double p = 1.5;
  double beta = 0.3;

  static ChargeParams create(double alpha, double p, double beta);
  /// Midpoint-of-window defaults for a given charge.
  static ChargeParams defaults_for(double alpha);

  bool l2_regime() const;  // |alpha| < sqrt(4 pi)
  double alpha2() const { return alpha * alpha; }
};

/// One realization of the renormalized exponential at level n:
/// density(x) = exp(alpha (P_n phi)(x) - alpha^2 C_n / 2) on the grid nodes.
/// C_n is the exact variance of the band-limited P_n phi (grid-matched
/// renormalization), so the density has mean one node-wise.
struct WickSample {
  ChargeParams params;
  int n_level = 0;
  RenormConstant renorm;  // value = grid-matched C_n; zero tail when exact
  TorusField density;
  double total_mass = 0.0;
  std::int64_t clamp_events = 0;  // exponent clamps at +700; poisoned moments
};

WickSample wick_exponential(const SpectralCoeffs& phi, const MultiplierSpec& spec, int n,
                            const ChargeParams& params, double clamp_threshold = 700.0);

/// Riemann sum of the density over grid nodes within torus distance <= radius
/// of the center. Any radius > 0; radius >= pi*sqrt(2) captures the whole torus.
double ball_mass(const WickSample& w, std::array<double, 2> center, double radius);

/// exp(-total_mass): the unnormalized Radon-Nikodym density of the tilted
/// measure against the free field, always in (0, 1].
double exp_measure_weight(const WickSample& w);

/// Fraction of grid nodes with (P_n phi)(x) > alpha (1+delta) C_n.
double thick_point_fraction(const SpectralCoeffs& phi, const MultiplierSpec& spec, int n,
                            const ChargeParams& params, double delta);

// ---------------------------------------------------------------------------
// Ensemble estimators. Replicate r uses stream_id = stream_base + r and
// reduces in index order, so reports are reproducible for any worker count.
// ---------------------------------------------------------------------------

struct ScalingEstimate {
  double slope = 0.0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::vector<double> radii;        // lambda values
  std::vector<double> log_moments;  // log E[ball_mass(lambda/2)^p]
  std::int64_t clamp_events = 0;
};

/// Regresses log E[mass(B(c, lambda/2))^p] on log lambda; ball centers are
/// drawn per replicate (the law is shift invariant, and averaging over
/// centers removes the lattice disc-area bias). Requires >= 3 radii spanning
/// a decade and 2^-n <= min(lambda)/4.
ScalingEstimate scaling_exponent_estimate(const MultiplierSpec& spec, int n,
                                          const ChargeParams& params, double p_moment,
                                          const std::vector<double>& radii, std::size_t ensemble,
                                          const TorusGrid& grid, std::uint64_t seed,
                                          std::uint64_t stream_base = 0, int workers = 1);

/// Predicted multifractal exponent xi(p) = 2p - alpha^2 p (p-1) / (4 pi).
double scaling_exponent_prediction(double alpha, double p_moment);

struct CauchyDecay {
  std::vector<int> levels;       // N values
  std::vector<double> mean_abs;  // E|<f, M_{N+1} - M_N>| per level
  std::vector<double> stderr_;
  LineFit log2_fit;              // log2(mean_abs) vs N
  BootstrapSlope boot;           // bootstrap over replicates
};

/// Coupled-level Cauchy estimate: M_N and M_{N+1} are built from the same
/// phi realization; reports per-level means and the fitted log2 slope.
CauchyDecay cauchy_decay_estimate(const MultiplierSpec& spec, const ChargeParams& params,
                                  const TorusField& test_fn, const std::vector<int>& n_range,
                                  std::size_t ensemble, const TorusGrid& grid, std::uint64_t seed,
                                  std::uint64_t stream_base = 0, int workers = 1);

struct BesovBoundEstimate {
  std::vector<int> levels;
  std::vector<double> mean_norm_p;  // E ||M_N||_{B^{-beta}_{p,p}}^p per level
  std::vector<double> stderr_;
  double running_median = 0.0;
  bool nondiverging = false;  // last level <= 2x running median
};

BesovBoundEstimate besov_bound_estimate(const MultiplierSpec& spec, const ChargeParams& params,
                                        const std::vector<int>& n_range, std::size_t ensemble,
                                        const TorusGrid& grid, std::uint64_t seed,
                                        std::uint64_t stream_base = 0, int workers = 1);

}  // namespace expphi2
