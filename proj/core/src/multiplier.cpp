#include "expphi2/multiplier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "expphi2/fft.hpp"
#include "expphi2/glue.hpp"

namespace expphi2 {

std::string to_string(MultiplierKind kind) {
  switch (kind) {
    case MultiplierKind::sharp_square: return "sharp_square";
    case MultiplierKind::sharp_ball: return "sharp_ball";
    case MultiplierKind::smooth_bump: return "smooth_bump";
    case MultiplierKind::circle_average: return "circle_average";
  }
  return "?";
}

MultiplierKind multiplier_kind_from_string(const std::string& name) {
  if (name == "sharp_square") return MultiplierKind::sharp_square;
  if (name == "sharp_ball") return MultiplierKind::sharp_ball;
  if (name == "smooth_bump") return MultiplierKind::smooth_bump;
  if (name == "circle_average") return MultiplierKind::circle_average;
  throw ConfigInvalid("unknown multiplier '" + name +
                      "' (expected sharp_square|sharp_ball|smooth_bump|circle_average)");
}

namespace {

// (1/2pi) integral over the unit circle of e^{-i xi.y} nu(dy), evaluated by
// a 256-point trapezoid rule; spectrally accurate for the periodic integrand.
double circle_average_radial(double r) {
  constexpr int kPoints = 256;
  double acc = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double theta = kTwoPi * i / kPoints;
    acc += std::cos(r * std::cos(theta));
  }
  return acc / kPoints;
}

// Memoized radial table for the circle average, keyed by |k|^2 at a given
// level; built under a lock once per (n, m).
struct MaskKey {
  MultiplierKind kind;
  int n;
  int m;
  bool operator<(const MaskKey& o) const {
    return std::tie(kind, n, m) < std::tie(o.kind, o.n, o.m);
  }
};

}  // namespace

MultiplierSpec MultiplierSpec::make(MultiplierKind kind) {
  MultiplierSpec s(kind);
  switch (kind) {
    case MultiplierKind::sharp_square:
    case MultiplierKind::sharp_ball:
      // compactly supported; kappa is a metadata placeholder, any value works
      s.kappa_ = 10.0;
      s.zeta_ = 2.0;
      s.claims_hypothesis_P_ = false;  // Dirichlet-type kernels change sign
      s.effective_radius_ = 1.0;
      s.decay_constant_ = 0.0;
      break;
    case MultiplierKind::smooth_bump:
      s.kappa_ = 10.0;  // compact support: effectively infinite decay
      s.zeta_ = 2.0;
      s.claims_hypothesis_P_ = true;
      s.effective_radius_ = 1.0;
      s.decay_constant_ = 0.0;
      break;
    case MultiplierKind::circle_average:
      // radial transform decays like r^{-1/2}: kappa = -3/2 in the
      // |x|^{2+kappa} convention, sup of r^{1/2}|psi| = sqrt(2/pi)
      s.kappa_ = -1.5;
      s.zeta_ = 2.0;
      s.claims_hypothesis_P_ = false;
      s.effective_radius_ = 8.0 / 3.0;
      s.decay_constant_ = std::sqrt(2.0 / kPi);
      break;
  }
  return s;
}

double MultiplierSpec::evaluate_radial(double r) const {
  r = std::fabs(r);
  switch (kind_) {
    case MultiplierKind::sharp_square:
      throw ConfigInvalid("sharp_square is not radial");
    case MultiplierKind::sharp_ball:
      return r <= 1.0 ? 1.0 : 0.0;
    case MultiplierKind::smooth_bump:
      // plateau B(0,1/2), support B(0,1), repo glue
      return ramp_down(2.0 * (r - 0.5));
    case MultiplierKind::circle_average:
      return circle_average_radial(r);
  }
  return 0.0;
}

double MultiplierSpec::evaluate(double xi1, double xi2) const {
  if (kind_ == MultiplierKind::sharp_square) {
    return (std::fabs(xi1) <= 1.0 && std::fabs(xi2) <= 1.0) ? 1.0 : 0.0;
  }
  return evaluate_radial(std::hypot(xi1, xi2));
}

bool oversampling_ok(const MultiplierSpec& spec, int n, const TorusGrid& grid) {
  if (n < 0) return false;
  return grid.m() >= 4.0 * std::ldexp(1.0, n) * spec.effective_radius();
}

void require_oversampling(const MultiplierSpec& spec, int n, const TorusGrid& grid) {
  if (!oversampling_ok(spec, n, grid)) {
    std::ostringstream msg;
    msg << "level " << n << " violates the oversampling rule on grid " << grid.m() << " (need m >= "
        << 4.0 * std::ldexp(1.0, n) * spec.effective_radius() << " for " << spec.name() << ")";
    throw LevelAboveNyquist(msg.str());
  }
}

const std::vector<double>& pn_mask(const MultiplierSpec& spec, int n, const TorusGrid& grid) {
  static std::mutex mu;
  static std::map<MaskKey, std::unique_ptr<std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const MaskKey key{spec.kind(), n, grid.m()};
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  const int m = grid.m();
  auto mask = std::make_unique<std::vector<double>>(grid.nodes(), 0.0);
  const double scale = std::ldexp(1.0, -n);
  std::unordered_map<long long, double> radial;  // |k|^2 -> psi at this level
  for (int a = 0; a < m; ++a) {
    const long long k1 = grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const long long k2 = grid.mode_of_index(b);
      double v;
      if (spec.kind() == MultiplierKind::sharp_square) {
        v = spec.evaluate(scale * k1, scale * k2);
      } else {
        const long long r2 = k1 * k1 + k2 * k2;
        auto rit = radial.find(r2);
        if (rit == radial.end()) {
          rit = radial.emplace(r2, spec.evaluate_radial(scale * std::sqrt(double(r2)))).first;
        }
        v = rit->second;
      }
      (*mask)[static_cast<std::size_t>(a) * m + b] = v;
    }
  }
  auto res = cache.emplace(key, std::move(mask));
  return *res.first->second;
}

SpectralCoeffs apply_pn(const MultiplierSpec& spec, int n, const SpectralCoeffs& c) {
  require_oversampling(spec, n, c.grid);
  const auto& mask = pn_mask(spec, n, c.grid);
  SpectralCoeffs out = c;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= mask[i];
  return out;
}

TorusField apply_pn(const MultiplierSpec& spec, int n, const TorusField& f) {
  return from_spectral_unchecked(apply_pn(spec, n, to_spectral(f)));
}

RenormConstant renorm_constant(const MultiplierSpec& spec, int n, int truncation_radius) {
  RenormConstant out;
  out.n_level = n;
  out.truncation_radius = truncation_radius;
  const double scale = std::ldexp(1.0, -n);
  double acc = 0.0;
  for (long long k1 = -truncation_radius; k1 <= truncation_radius; ++k1) {
    for (long long k2 = -truncation_radius; k2 <= truncation_radius; ++k2) {
      const double psi = spec.evaluate(scale * k1, scale * k2);
      if (psi != 0.0) acc += psi * psi / (1.0 + double(k1 * k1 + k2 * k2));
    }
  }
  out.value = acc / kTorusArea;

  if (spec.decay_constant() == 0.0 &&
      truncation_radius >= std::ldexp(1.0, n) * spec.effective_radius()) {
    out.tail_bound = 0.0;  // compact support fully inside the truncation box
  } else {
    // |psi(2^-n k)|^2 <= C^2 2^{2(2+kappa)n} |k|^{-2(2+kappa)}; compare the
    // lattice tail sum with the integral over |x| > R.
    const double expo = 2.0 * (2.0 + spec.kappa()) + 2.0;  // |k| exponent incl. 1/|k|^2
    const double c2 = spec.decay_constant() * spec.decay_constant() *
                      std::pow(2.0, 2.0 * (2.0 + spec.kappa()) * n);
    // sum_{|k|>R} |k|^{-expo} <= 2pi integral_R^inf r^{1-expo} dr = 2pi R^{2-expo}/(expo-2)
    const double tail_sum = kTwoPi * std::pow(double(truncation_radius), 2.0 - expo) / (expo - 2.0);
    out.tail_bound = c2 * tail_sum / kTorusArea;
  }
  return out;
}

double renorm_constant_grid(const MultiplierSpec& spec, int n, const TorusGrid& grid) {
  const auto& mask = pn_mask(spec, n, grid);
  const int m = grid.m();
  double acc = 0.0;
  for (int a = 0; a < m; ++a) {
    const double k1 = grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const double k2 = grid.mode_of_index(b);
      if (!grid.carries_mode(static_cast<int>(k1), static_cast<int>(k2))) continue;
      const double psi = mask[static_cast<std::size_t>(a) * m + b];
      acc += psi * psi / (1.0 + k1 * k1 + k2 * k2);
    }
  }
  return acc / kTorusArea;
}

}  // namespace expphi2
