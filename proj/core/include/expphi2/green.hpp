#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "expphi2/grid.hpp"
#include "expphi2/multiplier.hpp"
#include "expphi2/rng.hpp"

namespace expphi2 {

/// Whole-plane Green kernel of 1 - laplacian:
///   K(r) = (1/2pi) integral_1^inf exp(-(r/2)(t + 1/t)) dt/t,
/// positive, = -(1/2pi) log r + O(1) near 0, decaying like e^{-r/2}.
/// Adaptive quadrature to ~1e-10 relative error; throws NonpositiveRadius.
double kernel_k(double r);

/// G_{M,N}(d) = (1/4pi^2) sum_{|k|_inf <= R} psi(2^-m k) psi(2^-n k)
///              cos(k.d) / (1+|k|^2);
/// equals the renormalization constant at d = 0 when m = n.
double green_mn(const MultiplierSpec& spec, int m_level, int n_level,
                std::array<double, 2> displacement, int truncation_radius);

/// Tabulated G_{M,N} over a displacement set (spec's GreenTable).
struct GreenTable {
  MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  int m_level = 0;
  int n_level = 0;
  int truncation_radius = 0;
  std::vector<std::array<double, 2>> displacements;
  std::vector<double> values;
};

GreenTable green_table(const MultiplierSpec& spec, int m_level, int n_level,
                       const std::vector<std::array<double, 2>>& displacements,
                       int truncation_radius);

/// || G_{M,N+1} - G_{M,N} ||_{L^p(Lambda x Lambda)}^p reduced by translation
/// invariance to 4pi^2 * integral |g(d)|^p dd, with g evaluated on a
/// quad_points^2 displacement grid by inverse FFT (exact for band-limited
/// products under the oversampling rule).
double green_diff_norm(const MultiplierSpec& spec, int m_level, int n_level, double p_exponent,
                       int quad_points = 1024);

struct CovarianceCrosscheck {
  std::vector<std::array<double, 2>> displacements;
  std::vector<double> empirical;
  std::vector<double> expected;  // green_mn values
  std::vector<double> stderr_;
  double max_abs_deviation = 0.0;
  double max_deviation_stderr_units = 0.0;
};

/// Monte Carlo covariance of P_n phi at a displacement set against the
/// lattice sum. ensemble >= 5000 recommended.
CovarianceCrosscheck covariance_crosscheck(const MultiplierSpec& spec, int n,
                                           const TorusGrid& grid,
                                           const std::vector<std::array<double, 2>>& displacements,
                                           std::size_t ensemble, std::uint64_t seed,
                                           std::uint64_t stream_base = 0, int workers = 1);

}  // namespace expphi2
