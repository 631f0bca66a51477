#pragma once

#include <memory>
#include <string>
#include <vector>

#include "expphi2/grid.hpp"

namespace expphi2 {

enum class MultiplierKind { sharp_square, sharp_ball, smooth_bump, circle_average };

std::string to_string(MultiplierKind kind);
MultiplierKind multiplier_kind_from_string(const std::string& name);

/// Renormalization constant C_N = (1/4pi^2) sum_{|k|_inf <= R} psi(2^-N k)^2 / (1+|k|^2)
/// together with its truncation record and a tail bound (zero for compactly
/// supported psi once R covers the scaled support).
struct RenormConstant {
  int n_level = 0;
  double value = 0.0;
  int truncation_radius = 0;
  double tail_bound = 0.0;
};

/// Cutoff family psi: symmetric, psi(0) = 1, with decay exponent kappa and
/// Hoelder-at-origin exponent zeta as metadata. circle_average is the Fourier
/// transform of the uniform probability measure on the unit circle; it takes
/// values outside [0,1] and is flagged claims_hypothesis_P = false.
class MultiplierSpec {
 public:
  static MultiplierSpec make(MultiplierKind kind);
  static MultiplierSpec parse(const std::string& name) {
    return make(multiplier_kind_from_string(name));
  }

  MultiplierKind kind() const { return kind_; }
  std::string name() const { return to_string(kind_); }
  double kappa() const { return kappa_; }
  double zeta() const { return zeta_; }
  bool claims_hypothesis_P() const { return claims_hypothesis_P_; }

  /// Effective support radius used by the oversampling rule: exact support
  /// radius for compact psi, 8/3 for the decaying circle average.
  double effective_radius() const { return effective_radius_; }

  /// sup over the decay regime of |x|^{2+kappa} |psi(x)| (Hypothesis 1.1(ii)
  /// constant); used by renorm_constant's tail bound.
  double decay_constant() const { return decay_constant_; }

  double evaluate(double xi1, double xi2) const;
  double evaluate_radial(double r) const;

  bool operator==(const MultiplierSpec& o) const { return kind_ == o.kind_; }

 private:
  explicit MultiplierSpec(MultiplierKind k) : kind_(k) {}

  MultiplierKind kind_;
  double kappa_ = 10.0;
  double zeta_ = 2.0;
  bool claims_hypothesis_P_ = false;
  double effective_radius_ = 1.0;
  double decay_constant_ = 1.0;
};

/// True when the oversampling rule m >= 4 * 2^n * effective_radius holds, so
/// P_n maps grid fields to fully resolved continuous fields.
bool oversampling_ok(const MultiplierSpec& spec, int n, const TorusGrid& grid);
void require_oversampling(const MultiplierSpec& spec, int n, const TorusGrid& grid);

/// The multiplier mask psi(2^-n k) on the grid's mode lattice, cached per
/// (kind, n, m). Row-major in FFT index order, like SpectralCoeffs.
const std::vector<double>& pn_mask(const MultiplierSpec& spec, int n, const TorusGrid& grid);

/// P_n f: multiplies coeff(k) by psi(2^-n k). Checks the oversampling rule.
SpectralCoeffs apply_pn(const MultiplierSpec& spec, int n, const SpectralCoeffs& c);
TorusField apply_pn(const MultiplierSpec& spec, int n, const TorusField& f);

/// C_N with explicit truncation radius (>= 4 * 2^n recommended).
RenormConstant renorm_constant(const MultiplierSpec& spec, int n, int truncation_radius);

/// Variance of the band-limited P_n phi at a node for fields sampled on this
/// grid: the same lattice sum restricted to modes the grid carries. This is
/// the Wick normalization used by the exponential, making E[exp-density] = 1
/// exact for every built-in spec (equals renorm_constant for compact psi
/// under the oversampling rule).
double renorm_constant_grid(const MultiplierSpec& spec, int n, const TorusGrid& grid);

}  // namespace expphi2
