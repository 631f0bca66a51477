#include "expphi2/dyadic.hpp"

#include <cmath>
#include <string>

#include "expphi2/glue.hpp"

namespace expphi2 {

double DyadicPartition::chi(double r) { return ramp_down(3.0 * (r - 1.0)); }

double DyadicPartition::rho(double r) { return chi(0.5 * r) - chi(r); }

double DyadicPartition::block_weight(int j, double mode_radius) {
  if (j == -1) return chi(mode_radius);
  return rho(std::ldexp(mode_radius, -j));
}

int DyadicPartition::j_max(const TorusGrid& grid) {
  // log2(nyquist) - 1
  int j = -1;
  int v = grid.nyquist();
  while (v > 1) {
    v >>= 1;
    ++j;
  }
  return j;
}

TorusField lp_block(const SpectralCoeffs& c, int j) {
  const int jm = DyadicPartition::j_max(c.grid);
  if (j > jm) {
    throw BlockAboveNyquist("block " + std::to_string(j) + " above j_max=" + std::to_string(jm) +
                            " for grid " + std::to_string(c.grid.m()));
  }
  const int m = c.grid.m();
  SpectralCoeffs masked(c.grid);
  for (int a = 0; a < m; ++a) {
    const int k1 = c.grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const int k2 = c.grid.mode_of_index(b);
      const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      const double w = DyadicPartition::block_weight(j, r);
      if (w != 0.0) masked.at_index(a, b) = w * c.at_index(a, b);
    }
  }
  return from_spectral_unchecked(masked);
}

}  // namespace expphi2
