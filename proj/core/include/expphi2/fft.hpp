#pragma once

#include "expphi2/grid.hpp"

namespace expphi2 {

/// Fourier coefficients of a grid field w.r.t. e_k = (1/2pi) e^{i k.x}:
/// coeff(k) = spacing^2 * sum_j f(x_j) conj(e_k(x_j)). A constant field 1
/// maps to coeff(0) = 2pi.
SpectralCoeffs to_spectral(const TorusField& f);

/// Inverse of to_spectral: f(x_j) = sum_k coeff(k) e_k(x_j), real part.
/// Throws SymmetryViolation if the Hermitian defect exceeds 1e-8 relative to
/// the largest coefficient (corrupted spectral data).
TorusField from_spectral(const SpectralCoeffs& c);

/// Same transform without the symmetry gate, for callers that construct
/// coefficients mode-by-mode and want raw speed in inner loops.
TorusField from_spectral_unchecked(const SpectralCoeffs& c);

}  // namespace expphi2
