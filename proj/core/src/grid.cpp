#include "expphi2/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace expphi2 {

namespace {
bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }
}  // namespace

TorusGrid::TorusGrid(int points_per_dim) : m_(points_per_dim) {
  if (m_ < 8 || !is_pow2(m_)) {
    throw ConfigInvalid("grid size must be a power of two >= 8, got " + std::to_string(m_));
  }
}

double SpectralCoeffs::hermitian_defect() const {
  const int m = grid.m();
  double worst = 0.0;
  for (int a = 0; a < m; ++a) {
    const int an = (m - a) % m;
    for (int b = 0; b < m; ++b) {
      const int bn = (m - b) % m;
      const std::complex<double> d = at_index(a, b) - std::conj(at_index(an, bn));
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

double SpectralCoeffs::parseval_sum() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

double lp_norm(const TorusField& f, double p) {
  if (p < 1.0) throw ConfigInvalid("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double v : f.values) mx = std::max(mx, std::abs(v));
    return mx;
  }
  const double w = f.grid.spacing() * f.grid.spacing();
  double s = 0.0;
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(w * s, 1.0 / p);
}

double integral(const TorusField& f) {
  const double w = f.grid.spacing() * f.grid.spacing();
  double s = 0.0;
  for (double v : f.values) s += v;
  return w * s;
}

double torus_distance(double ax, double ay, double bx, double by) {
  double dx = std::fabs(ax - bx);
  double dy = std::fabs(ay - by);
  dx = std::min(dx, kTwoPi - dx);
  dy = std::min(dy, kTwoPi - dy);
  return std::hypot(dx, dy);
}

}  // namespace expphi2
