#pragma once

#include "expphi2/fft.hpp"
#include "expphi2/grid.hpp"

namespace expphi2 {

/// Dyadic partition of unity on R^2 built from the repo glue:
///   chi = 1 on |xi| <= 1, smooth transition on (1, 4/3), 0 beyond;
///   rho(xi) = chi(xi/2) - chi(xi), supported in 1 <= |xi| <= 8/3;
///   chi(xi) + sum_{j>=0} rho(2^-j xi) = 1 by telescoping.
/// Consequently |k|=1 modes sit in block -1 and |k|=2 modes in block 0.
struct DyadicPartition {
  static double chi(double r);
  static double rho(double r);

  /// rho_j with rho_{-1} = chi, evaluated at a lattice mode.
  static double block_weight(int j, double mode_radius);

  /// Largest block index whose support starts below the grid Nyquist:
  /// j_max = log2(m/2) - 1. Blocks -1..j_max sum to 1 exactly on the
  /// Euclidean ball |k| <= m/2 (the resolved modes).
  static int j_max(const TorusGrid& grid);
};

/// Littlewood-Paley block: Delta_j f = sum_k rho_j(k) fhat(k) e_k.
/// Throws BlockAboveNyquist for j > j_max(grid).
TorusField lp_block(const SpectralCoeffs& c, int j);

}  // namespace expphi2
