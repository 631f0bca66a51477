#pragma once

#include "expphi2/dyadic.hpp"
#include "expphi2/grid.hpp"

namespace expphi2 {

/// Besov norm value plus the truncation record: block sums stop at j_max,
/// which is exact for resolved-mode fields and a documented bias otherwise.
struct BesovNorm {
  double value = 0.0;
  int j_max = 0;
};

/// || f ||_{B^s_{p,q}} = ( sum_{j=-1}^{j_max} 2^{jsq} ||Delta_j f||_{L^p}^q )^{1/q},
/// sup over j when q = infinity. L^p norms are Riemann sums.
BesovNorm besov_norm(const TorusField& f, double s, double p, double q);
BesovNorm besov_norm(const SpectralCoeffs& c, double s, double p, double q);

/// || f ||_{H^s} = ( sum_k (1+|k|^2)^s |fhat(k)|^2 )^{1/2}.
double sobolev_norm(const TorusField& f, double s);
double sobolev_norm(const SpectralCoeffs& c, double s);

/// e^{t(laplacian-1)/2} f: multiplies coeff(k) by exp(-t(1+|k|^2)/2); t=0 is
/// the identity. t >= 0 required.
TorusField heat_semigroup(const TorusField& f, double t);
SpectralCoeffs heat_semigroup(const SpectralCoeffs& c, double t);

}  // namespace expphi2
