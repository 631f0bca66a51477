#pragma once

#include <array>
#include <string>
#include <vector>

#include "expphi2/grid.hpp"

namespace expphi2 {

/// Real cosine/sine basis of L^2: e_{(0,0)} = 1/2pi,
/// e_k = cos(k.x)/(sqrt2 pi) for k in Z^2_+ (k1>0 or (k1=0, k2>0)),
/// e_k = sin(k.x)/(sqrt2 pi) for k in Z^2_-.
struct RealConsElement {
  int k1 = 0;
  int k2 = 0;

  bool is_zero() const { return k1 == 0 && k2 == 0; }
  bool positive_half() const { return k1 > 0 || (k1 == 0 && k2 > 0); }

  /// <f, e_k> for a spectral field (exact in the resolved modes).
  double pair(const SpectralCoeffs& c) const;

  /// Eigenvalue of (1 - laplacian): 1 + |k|^2.
  double lambda() const { return 1.0 + double(k1) * k1 + double(k2) * k2; }

  /// Node values of e_k on a grid.
  TorusField field(const TorusGrid& grid) const;
};

enum class OuterKind { poly2, tanh_sum, cos_sum };

std::string to_string(OuterKind o);

/// Smooth cylinder functional F(phi) = f(<phi,l_1>, ..., <phi,l_n>) with
/// outer f of bounded first and second derivatives:
///   poly2:    f(u) = sum_i u_i^2 / (1 + u_i^2)   (bounded-smoothed quadratic)
///   tanh_sum: f(u) = tanh(sum_i u_i)
///   cos_sum:  f(u) = cos(sum_i u_i)
struct CylinderFunctional {
  std::vector<RealConsElement> directions;
  OuterKind outer = OuterKind::tanh_sum;
  std::string description;

  double value(const SpectralCoeffs& phi) const;
  /// Partial derivatives d_j f at the pairing vector; the H-gradient is
  /// D_H F = sum_j (d_j f) l_j.
  std::vector<double> gradient_coefficients(const SpectralCoeffs& phi) const;
};

CylinderFunctional make_functional(OuterKind outer, const std::vector<RealConsElement>& dirs);

/// The default 10-functional family used by the statistical suites: low-mode
/// cosine/sine directions combined through all three outer functions.
std::vector<CylinderFunctional> default_functional_family();

}  // namespace expphi2
