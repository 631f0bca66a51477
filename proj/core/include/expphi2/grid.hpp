#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "expphi2/errors.hpp"

namespace expphi2 {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
// Lebesgue measure of the torus [-pi,pi)^2.
inline constexpr double kTorusArea = 4.0 * kPi * kPi;

/// Uniform m x m grid on the torus [-pi,pi)^2, m a power of two >= 8.
/// Node j maps to x_j = -pi + j*spacing; mode range is [-m/2, m/2-1] per axis.
class TorusGrid {
 public:
  explicit TorusGrid(int points_per_dim);

  int m() const { return m_; }
  double spacing() const { return kTwoPi / m_; }
  int nyquist() const { return m_ / 2; }
  std::int64_t nodes() const { return static_cast<std::int64_t>(m_) * m_; }

  double node_coord(int j) const { return -kPi + j * spacing(); }

  // index <-> signed mode along one axis
  int mode_of_index(int a) const { return a < m_ / 2 ? a : a - m_; }
  int index_of_mode(int k) const { return k >= 0 ? k : k + m_; }

  // Modes the grid carries: |k_i| <= m/2 - 1. The Nyquist row k_i = -m/2 has no
  // conjugate partner in range and is kept identically zero by all samplers.
  bool carries_mode(int k1, int k2) const {
    int ny = nyquist();
    return k1 > -ny && k1 < ny && k2 > -ny && k2 < ny;
  }

  // Modes on which the dyadic partition sums to exactly 1 (Euclidean ball up
  // to the Nyquist radius); block reconstruction is exact on these.
  bool resolved_mode(int k1, int k2) const {
    if (!carries_mode(k1, k2)) return false;
    double r2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
    double ny = nyquist();
    return r2 <= ny * ny;
  }

  bool operator==(const TorusGrid& o) const { return m_ == o.m_; }

 private:
  int m_;
};

/// Real field sampled at the grid nodes, row-major: values[i*m + j] = f(x_i, y_j).
struct TorusField {
  TorusField() = default;
  explicit TorusField(const TorusGrid& g, double fill = 0.0)
      : grid(g), values(g.nodes(), fill) {}

  TorusGrid grid{8};
  std::vector<double> values;

  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.m() + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.m() + j]; }
};

/// Complex Fourier coefficients w.r.t. e_k(x) = (1/2pi) exp(i k.x), stored in
/// FFT index order: coeffs[a*m + b] is the coefficient of mode
/// (mode_of_index(a), mode_of_index(b)). Real fields satisfy
/// coeff(-k) = conj(coeff(k)).
struct SpectralCoeffs {
  SpectralCoeffs() = default;
  explicit SpectralCoeffs(const TorusGrid& g)
      : grid(g), coeffs(g.nodes(), std::complex<double>(0.0, 0.0)) {}

  TorusGrid grid{8};
  std::vector<std::complex<double>> coeffs;

  std::complex<double>& at_index(int a, int b) {
    return coeffs[static_cast<std::size_t>(a) * grid.m() + b];
  }
  std::complex<double> at_index(int a, int b) const {
    return coeffs[static_cast<std::size_t>(a) * grid.m() + b];
  }
  std::complex<double>& at_mode(int k1, int k2) {
    return at_index(grid.index_of_mode(k1), grid.index_of_mode(k2));
  }
  std::complex<double> at_mode(int k1, int k2) const {
    return at_index(grid.index_of_mode(k1), grid.index_of_mode(k2));
  }

  /// max_k |c(k) - conj(c(-k))|, the deviation from real-field symmetry.
  double hermitian_defect() const;

  /// Parseval sum: sum_k |c(k)|^2 (equals the Riemann integral of f^2 for
  /// fields produced by to_spectral).
  double parseval_sum() const;
};

/// L^p norm of a grid field as a Riemann sum with weight spacing^2;
/// p = infinity is the grid max. p >= 1 required.
double lp_norm(const TorusField& f, double p);

/// Riemann integral of the field over the torus (weight spacing^2).
double integral(const TorusField& f);

/// Torus (wrap-around) distance between two points of [-pi,pi)^2.
double torus_distance(double ax, double ay, double bx, double by);

}  // namespace expphi2
