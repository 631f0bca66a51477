#include "expphi2/norms.hpp"

#include <algorithm>
#include <cmath>

#include "expphi2/fft.hpp"

namespace expphi2 {

BesovNorm besov_norm(const SpectralCoeffs& c, double s, double p, double q) {
  const int jm = DyadicPartition::j_max(c.grid);
  BesovNorm out;
  out.j_max = jm;
  if (std::isinf(q)) {
    double sup = 0.0;
    for (int j = -1; j <= jm; ++j) {
      const TorusField blk = lp_block(c, j);
      sup = std::max(sup, std::pow(2.0, j * s) * lp_norm(blk, p));
    }
    out.value = sup;
    return out;
  }
  double acc = 0.0;
  for (int j = -1; j <= jm; ++j) {
    const TorusField blk = lp_block(c, j);
    acc += std::pow(2.0, j * s * q) * std::pow(lp_norm(blk, p), q);
  }
  out.value = std::pow(acc, 1.0 / q);
  return out;
}

BesovNorm besov_norm(const TorusField& f, double s, double p, double q) {
  return besov_norm(to_spectral(f), s, p, q);
}

double sobolev_norm(const SpectralCoeffs& c, double s) {
  const int m = c.grid.m();
  double acc = 0.0;
  for (int a = 0; a < m; ++a) {
    const double k1 = c.grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const double k2 = c.grid.mode_of_index(b);
      const double w = std::pow(1.0 + k1 * k1 + k2 * k2, s);
      acc += w * std::norm(c.at_index(a, b));
    }
  }
  return std::sqrt(acc);
}

double sobolev_norm(const TorusField& f, double s) { return sobolev_norm(to_spectral(f), s); }

SpectralCoeffs heat_semigroup(const SpectralCoeffs& c, double t) {
  if (t < 0.0) throw ConfigInvalid("heat_semigroup requires t >= 0");
  const int m = c.grid.m();
  SpectralCoeffs out = c;
  if (t == 0.0) return out;
  for (int a = 0; a < m; ++a) {
    const double k1 = c.grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const double k2 = c.grid.mode_of_index(b);
      out.at_index(a, b) *= std::exp(-0.5 * t * (1.0 + k1 * k1 + k2 * k2));
    }
  }
  return out;
}

TorusField heat_semigroup(const TorusField& f, double t) {
  return from_spectral_unchecked(heat_semigroup(to_spectral(f), t));
}

}  // namespace expphi2
