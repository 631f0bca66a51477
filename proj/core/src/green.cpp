#include "expphi2/green.hpp"

#include <cmath>
#include <complex>

#include "expphi2/fft.hpp"
#include "expphi2/gff.hpp"
#include "expphi2/parallel.hpp"
#include "expphi2/stats.hpp"

namespace expphi2 {

namespace {

// integrand of the kernel after t = e^u: exp(-r cosh u)
double kernel_integrand(double r, double u) { return std::exp(-r * std::cosh(u)); }

double adaptive_simpson(double r, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = kernel_integrand(r, lm);
  const double frm = kernel_integrand(r, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(r, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(r, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double kernel_k(double r) {
  if (!(r > 0.0)) throw NonpositiveRadius("kernel_k requires r > 0");
  // truncate where the integrand is below ~1e-26 relative to the peak
  const double upper = std::log(1.0 + 120.0 / r);
  const double fa = kernel_integrand(r, 0.0);
  const double fb = kernel_integrand(r, upper);
  const double fm = kernel_integrand(r, 0.5 * upper);
  const double whole = upper / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = std::max(whole, 1e-300) * 1e-12;
  const double integral = adaptive_simpson(r, 0.0, upper, fa, fm, fb, whole, tol, 48);
  return integral / kTwoPi;
}

double green_mn(const MultiplierSpec& spec, int m_level, int n_level,
                std::array<double, 2> displacement, int truncation_radius) {
  const int R = truncation_radius;
  const double sm = std::ldexp(1.0, -m_level);
  const double sn = std::ldexp(1.0, -n_level);
  // e^{i k.d} factorizes over axes
  std::vector<std::complex<double>> u(2 * R + 1), v(2 * R + 1);
  for (int k = -R; k <= R; ++k) {
    u[k + R] = std::polar(1.0, k * displacement[0]);
    v[k + R] = std::polar(1.0, k * displacement[1]);
  }
  double acc = 0.0;
  for (int k1 = -R; k1 <= R; ++k1) {
    for (int k2 = -R; k2 <= R; ++k2) {
      const double p1 = spec.evaluate(sm * k1, sm * k2);
      if (p1 == 0.0) continue;
      const double p2 = spec.evaluate(sn * k1, sn * k2);
      if (p2 == 0.0) continue;
      const double lambda = 1.0 + double(k1) * k1 + double(k2) * k2;
      acc += p1 * p2 / lambda * (u[k1 + R] * v[k2 + R]).real();
    }
  }
  return acc / kTorusArea;
}

GreenTable green_table(const MultiplierSpec& spec, int m_level, int n_level,
                       const std::vector<std::array<double, 2>>& displacements,
                       int truncation_radius) {
  GreenTable t;
  t.spec = spec;
  t.m_level = m_level;
  t.n_level = n_level;
  t.truncation_radius = truncation_radius;
  t.displacements = displacements;
  t.values.reserve(displacements.size());
  for (const auto& d : displacements) {
    t.values.push_back(green_mn(spec, m_level, n_level, d, truncation_radius));
  }
  return t;
}

double green_diff_norm(const MultiplierSpec& spec, int m_level, int n_level, double p_exponent,
                       int quad_points) {
  if (p_exponent < 1.0) throw ConfigInvalid("green_diff_norm requires p >= 1");
  const TorusGrid dgrid(quad_points);
  const int P = quad_points;
  // g(d) = sum_k w(k) e^{ik.d}, w = psi_m (psi_{n+1} - psi_n) / lambda / 4pi^2
  SpectralCoeffs c(dgrid);
  const double sm = std::ldexp(1.0, -m_level);
  const double sn = std::ldexp(1.0, -n_level);
  const double sn1 = std::ldexp(1.0, -(n_level + 1));
  for (int a = 0; a < P; ++a) {
    const int k1 = dgrid.mode_of_index(a);
    for (int b = 0; b < P; ++b) {
      const int k2 = dgrid.mode_of_index(b);
      const double p1 = spec.evaluate(sm * k1, sm * k2);
      if (p1 == 0.0) continue;
      const double pd =
          spec.evaluate(sn1 * k1, sn1 * k2) - spec.evaluate(sn * k1, sn * k2);
      if (pd == 0.0) continue;
      const double lambda = 1.0 + double(k1) * k1 + double(k2) * k2;
      // from_spectral multiplies by e^{ikd}/2pi, so load 2pi * w(k)
      c.at_index(a, b) = kTwoPi * p1 * pd / (lambda * kTorusArea);
    }
  }
  const TorusField g = from_spectral_unchecked(c);
  const double cell = dgrid.spacing() * dgrid.spacing();
  double acc = 0.0;
  for (double v : g.values) acc += std::pow(std::fabs(v), p_exponent);
  return kTorusArea * cell * acc;
}

CovarianceCrosscheck covariance_crosscheck(const MultiplierSpec& spec, int n,
                                           const TorusGrid& grid,
                                           const std::vector<std::array<double, 2>>& displacements,
                                           std::size_t ensemble, std::uint64_t seed,
                                           std::uint64_t stream_base, int workers) {
  require_oversampling(spec, n, grid);
  const auto& mask = pn_mask(spec, n, grid);
  const int m = grid.m();

  // modes with nonzero multiplier, in the canonical half-lattice order
  struct Mode {
    int k1, k2;
    double psi;
  };
  std::vector<Mode> modes;
  detail::for_each_positive_mode(grid, [&](int k1, int k2) {
    const double psi =
        mask[static_cast<std::size_t>(grid.index_of_mode(k1)) * m + grid.index_of_mode(k2)];
    if (psi != 0.0) modes.push_back({k1, k2, psi});
  });

  // evaluation points: origin plus the displacement set
  std::vector<std::array<double, 2>> pts;
  pts.push_back({0.0, 0.0});
  for (const auto& d : displacements) pts.push_back(d);
  const std::size_t np = pts.size();

  // phase table: e^{i k.x} / 2pi per (mode, point)
  std::vector<std::complex<double>> phase(modes.size() * np);
  for (std::size_t q = 0; q < modes.size(); ++q) {
    for (std::size_t j = 0; j < np; ++j) {
      phase[q * np + j] =
          std::polar(1.0 / kTwoPi, modes[q].k1 * pts[j][0] + modes[q].k2 * pts[j][1]);
    }
  }
  const double psi0 = mask[static_cast<std::size_t>(grid.index_of_mode(0)) * m + grid.index_of_mode(0)];

  std::vector<double> prods(ensemble * displacements.size());
  parallel_for(ensemble, workers, [&](std::size_t r) {
    RngStream rng(seed, stream_base + r);
    std::vector<double> x(np, 0.0);
    {  // zero mode
      const double c0 = rng.normal() * psi0;
      for (std::size_t j = 0; j < np; ++j) x[j] += c0 / kTwoPi;
    }
    for (std::size_t q = 0; q < modes.size(); ++q) {
      const double sd =
          std::sqrt(GffSample::mode_variance(modes[q].k1, modes[q].k2) * 0.5) * modes[q].psi;
      const auto z = rng.normal_pair();
      const std::complex<double> c(sd * z[0], sd * z[1]);
      for (std::size_t j = 0; j < np; ++j) {
        x[j] += 2.0 * (c * phase[q * np + j]).real();
      }
    }
    for (std::size_t d = 0; d < displacements.size(); ++d) {
      prods[r * displacements.size() + d] = x[0] * x[d + 1];
    }
  });

  CovarianceCrosscheck out;
  out.displacements = displacements;
  const int R = std::min(4 << n, grid.nyquist() - 1);
  for (std::size_t d = 0; d < displacements.size(); ++d) {
    std::vector<double> col(ensemble);
    for (std::size_t r = 0; r < ensemble; ++r) col[r] = prods[r * displacements.size() + d];
    const Summary s = summarize(col);
    const double expect = green_mn(spec, n, n, displacements[d], R);
    out.empirical.push_back(s.mean);
    out.expected.push_back(expect);
    out.stderr_.push_back(s.stderr_mean);
    const double dev = std::fabs(s.mean - expect);
    out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
    if (s.stderr_mean > 0.0) {
      out.max_deviation_stderr_units =
          std::max(out.max_deviation_stderr_units, dev / s.stderr_mean);
    }
  }
  return out;
}

}  // namespace expphi2
