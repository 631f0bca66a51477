#pragma once

#include <optional>
#include <vector>

#include "expphi2/grid.hpp"
#include "expphi2/multiplier.hpp"
#include "expphi2/rng.hpp"

namespace expphi2 {

/// One draw from the massive free field: independent complex Gaussians per
/// half-lattice mode with E|coeff(k)|^2 = (1+|k|^2)^{-1}, Hermitian-paired,
/// real zero mode, Nyquist rows absent (band-limited truncation).
struct GffSample {
  SpectralCoeffs spectral;

  static double mode_variance(int k1, int k2) {
    return 1.0 / (1.0 + double(k1) * k1 + double(k2) * k2);
  }
};

GffSample sample_gff(const TorusGrid& grid, RngStream& rng);

/// State of the linear stochastic heat flow dX = (1/2)(laplacian-1)X dt + dW.
struct OuState {
  double time = 0.0;
  SpectralCoeffs spectral;
};

/// Optional shaping of the driving noise: multiplier (spec, n) realizes the
/// band-limited noise P_n dW; scale = 0 disables the noise entirely
/// (deterministic decay test hook).
struct OuNoise {
  const MultiplierSpec* spec = nullptr;
  int n = 0;
  double scale = 1.0;
};

/// Exact one-step transition, per mode:
///   c(k) <- e^{-dt(1+|k|^2)/2} c(k) + eta_k,
/// eta_k complex Gaussian (real at k=0, Hermitian-paired) with variance
/// sigma_k^2 (1 - e^{-dt(1+|k|^2)}) / (1+|k|^2), sigma_k = psi(2^-n k) when a
/// noise multiplier is given. Exact in law for any dt > 0.
OuState ou_step(const OuState& state, double dt, RngStream& rng, const OuNoise& noise = {});

/// States at times 0, dt, 2dt, ..., horizon. Throws InvalidHorizon when
/// horizon < dt.
std::vector<OuState> ou_trajectory(const TorusField& initial, double horizon, double dt,
                                   RngStream& rng, const OuNoise& noise = {});

namespace detail {
/// Iterates the positive half-lattice Z^2_+ = {k1>0} U {k1=0, k2>0} over the
/// modes the grid carries, in a fixed row-major order. fn(k1, k2).
template <typename Fn>
void for_each_positive_mode(const TorusGrid& grid, Fn&& fn) {
  const int ny = grid.nyquist();
  for (int k2 = 1; k2 < ny; ++k2) fn(0, k2);
  for (int k1 = 1; k1 < ny; ++k1) {
    for (int k2 = -ny + 1; k2 < ny; ++k2) fn(k1, k2);
  }
}
}  // namespace detail

}  // namespace expphi2
