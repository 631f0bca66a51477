#include "expphi2/gmc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "expphi2/fft.hpp"
#include "expphi2/parallel.hpp"

namespace expphi2 {

namespace {
constexpr double kSqrt8Pi = 5.0132565492620005;  // sqrt(8 pi)
}

ChargeParams ChargeParams::create(double alpha, double p, double beta) {
  std::ostringstream err;
  if (!(std::fabs(alpha) < kSqrt8Pi)) {
    err << "|alpha| = " << std::fabs(alpha) << " must be < sqrt(8 pi)";
    throw ConfigInvalid(err.str());
  }
  const double a2 = alpha * alpha;
  const double p_hi = a2 > 0.0 ? std::min(8.0 * kPi / a2, 2.0) : 2.0;
  if (!(p > 1.0 && p < p_hi)) {
    err << "p = " << p << " must lie in (1, " << p_hi << ")";
    throw ConfigInvalid(err.str());
  }
  const double b_lo = a2 * (p - 1.0) / (4.0 * kPi);
  const double b_hi = 2.0 * (p - 1.0) / p;
  if (!(beta > b_lo && beta < b_hi)) {
    err << "beta = " << beta << " must lie in (" << b_lo << ", " << b_hi << ")";
    throw ConfigInvalid(err.str());
  }
  ChargeParams c;
  c.alpha = alpha;
  c.p = p;
  c.beta = beta;
  return c;
}

ChargeParams ChargeParams::defaults_for(double alpha) {
  const double a2 = alpha * alpha;
  const double p_hi = a2 > 0.0 ? std::min(8.0 * kPi / a2, 2.0) : 2.0;
  const double p = 0.5 * (1.0 + p_hi);
  const double b_lo = a2 * (p - 1.0) / (4.0 * kPi);
  const double b_hi = 2.0 * (p - 1.0) / p;
  return create(alpha, p, 0.5 * (b_lo + b_hi));
}

bool ChargeParams::l2_regime() const { return alpha2() < 4.0 * kPi; }

WickSample wick_exponential(const SpectralCoeffs& phi, const MultiplierSpec& spec, int n,
                            const ChargeParams& params, double clamp_threshold) {
  require_oversampling(spec, n, phi.grid);

  WickSample w;
  w.params = params;
  w.n_level = n;
  const double cn = renorm_constant_grid(spec, n, phi.grid);
  w.renorm.n_level = n;
  w.renorm.value = cn;
  w.renorm.truncation_radius = phi.grid.nyquist();
  w.renorm.tail_bound = 0.0;

  const TorusField pn_phi = from_spectral_unchecked(apply_pn(spec, n, phi));
  w.density = TorusField(phi.grid);
  const double shift = -0.5 * params.alpha2() * cn;
  std::int64_t clamps = 0;
  for (std::size_t i = 0; i < pn_phi.values.size(); ++i) {
    double e = params.alpha * pn_phi.values[i] + shift;
    if (e > clamp_threshold) {
      e = clamp_threshold;
      ++clamps;
    }
    w.density.values[i] = std::exp(e);
  }
  w.clamp_events = clamps;
  w.total_mass = integral(w.density);
  return w;
}

double ball_mass(const WickSample& w, std::array<double, 2> center, double radius) {
  if (!(radius > 0.0)) throw NonpositiveRadius("ball_mass requires radius > 0");
  const TorusGrid& g = w.density.grid;
  const int m = g.m();
  const double cell = g.spacing() * g.spacing();

  // restrict the scan to the bounding box of the ball in index space
  const double h = g.spacing();
  const int reach = std::min(m / 2, static_cast<int>(std::ceil(radius / h)) + 1);
  const int ci = static_cast<int>(std::floor((center[0] + kPi) / h));
  const int cj = static_cast<int>(std::floor((center[1] + kPi) / h));
  double acc = 0.0;
  for (int di = -reach; di <= reach; ++di) {
    const int i = ((ci + di) % m + m) % m;
    const double xi = g.node_coord(i);
    for (int dj = -reach; dj <= reach; ++dj) {
      const int j = ((cj + dj) % m + m) % m;
      const double yj = g.node_coord(j);
      if (torus_distance(xi, yj, center[0], center[1]) <= radius) {
        acc += w.density.at(i, j);
      }
    }
  }
  return cell * acc;
}

double exp_measure_weight(const WickSample& w) { return std::exp(-w.total_mass); }

double thick_point_fraction(const SpectralCoeffs& phi, const MultiplierSpec& spec, int n,
                            const ChargeParams& params, double delta) {
  const double cn = renorm_constant_grid(spec, n, phi.grid);
  const TorusField pn_phi = from_spectral_unchecked(apply_pn(spec, n, phi));
  const double threshold = params.alpha * (1.0 + delta) * cn;
  std::int64_t count = 0;
  for (double v : pn_phi.values) {
    if (v > threshold) ++count;
  }
  return double(count) / double(pn_phi.values.size());
}

double scaling_exponent_prediction(double alpha, double p_moment) {
  return 2.0 * p_moment - alpha * alpha * p_moment * (p_moment - 1.0) / (4.0 * kPi);
}

ScalingEstimate scaling_exponent_estimate(const MultiplierSpec& spec, int n,
                                          const ChargeParams& params, double p_moment,
                                          const std::vector<double>& radii, std::size_t ensemble,
                                          const TorusGrid& grid, std::uint64_t seed,
                                          std::uint64_t stream_base, int workers) {
  if (radii.size() < 3) throw DegenerateRegression("scaling estimate needs >= 3 radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (*hi / *lo < 8.0) throw DegenerateRegression("radii must span at least one decade (8x)");
  if (std::ldexp(1.0, -n) > *lo / 4.0) {
    throw ConfigInvalid("cutoff scale 2^-n must be <= min(lambda)/4");
  }
  if (!(p_moment >= 1.0 && p_moment <= 2.0)) {
    throw ConfigInvalid("p_moment must lie in [1,2]");
  }

  const std::size_t nr = radii.size();
  // masses[r*nr + q] = mass of replicate r at radius q
  std::vector<double> masses(ensemble * nr, 0.0);
  std::vector<std::int64_t> clamps(ensemble, 0);
  parallel_for(ensemble, workers, [&](std::size_t r) {
    RngStream rng(seed, stream_base + r);
    const GffSample phi = sample_gff(grid, rng);
    const WickSample w = wick_exponential(phi.spectral, spec, n, params);
    clamps[r] = w.clamp_events;
    // one random center per replicate; the GMC law is shift invariant
    const double cx = -kPi + kTwoPi * rng.uniform();
    const double cy = -kPi + kTwoPi * rng.uniform();
    for (std::size_t q = 0; q < nr; ++q) {
      masses[r * nr + q] = ball_mass(w, {cx, cy}, 0.5 * radii[q]);
    }
  });

  ScalingEstimate out;
  out.radii = radii;
  for (std::size_t r = 0; r < ensemble; ++r) out.clamp_events += clamps[r];

  std::vector<double> logs(nr);
  auto slope_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> lx(nr), ly(nr);
    for (std::size_t q = 0; q < nr; ++q) {
      double acc = 0.0;
      for (std::size_t i : idx) acc += std::pow(masses[i * nr + q], p_moment);
      lx[q] = std::log(radii[q]);
      ly[q] = std::log(acc / double(idx.size()));
    }
    return ols_fit(lx, ly).slope;
  };

  RngStream boot_rng(seed ^ 0x626f6f74ULL, stream_base);  // separate bootstrap stream
  const BootstrapSlope boot = bootstrap_slope(ensemble, slope_of, boot_rng);
  out.slope = boot.slope;
  out.stderr_ = boot.stderr_;
  out.ci_lo = boot.ci_lo;
  out.ci_hi = boot.ci_hi;
  for (std::size_t q = 0; q < nr; ++q) {
    double acc = 0.0;
    for (std::size_t r = 0; r < ensemble; ++r) acc += std::pow(masses[r * nr + q], p_moment);
    logs[q] = std::log(acc / double(ensemble));
  }
  out.log_moments = logs;
  return out;
}

CauchyDecay cauchy_decay_estimate(const MultiplierSpec& spec, const ChargeParams& params,
                                  const TorusField& test_fn, const std::vector<int>& n_range,
                                  std::size_t ensemble, const TorusGrid& grid, std::uint64_t seed,
                                  std::uint64_t stream_base, int workers) {
  for (int n : n_range) require_oversampling(spec, n + 1, grid);

  const std::size_t nl = n_range.size();
  const double cell = grid.spacing() * grid.spacing();
  std::vector<double> diffs(ensemble * nl, 0.0);

  parallel_for(ensemble, workers, [&](std::size_t r) {
    RngStream rng(seed, stream_base + r);
    const GffSample phi = sample_gff(grid, rng);
    // consecutive levels share this phi (coupled construction); memoize the
    // pairing <f, M_level> per level since ranges usually overlap in (N, N+1)
    std::map<int, double> pairing;
    auto pairing_at = [&](int level) {
      auto it = pairing.find(level);
      if (it != pairing.end()) return it->second;
      const WickSample w = wick_exponential(phi.spectral, spec, level, params);
      double acc = 0.0;
      for (std::size_t i = 0; i < w.density.values.size(); ++i) {
        acc += w.density.values[i] * test_fn.values[i];
      }
      return pairing.emplace(level, cell * acc).first->second;
    };
    for (std::size_t q = 0; q < nl; ++q) {
      diffs[r * nl + q] = std::fabs(pairing_at(n_range[q] + 1) - pairing_at(n_range[q]));
    }
  });

  CauchyDecay out;
  out.levels = n_range;
  out.mean_abs.resize(nl);
  out.stderr_.resize(nl);
  for (std::size_t q = 0; q < nl; ++q) {
    std::vector<double> col(ensemble);
    for (std::size_t r = 0; r < ensemble; ++r) col[r] = diffs[r * nl + q];
    const Summary s = summarize(col);
    out.mean_abs[q] = s.mean;
    out.stderr_[q] = s.stderr_mean;
  }

  std::vector<double> xs(nl), ys(nl);
  auto slope_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<double> lx(nl), ly(nl);
    for (std::size_t q = 0; q < nl; ++q) {
      double acc = 0.0;
      for (std::size_t i : idx) acc += diffs[i * nl + q];
      lx[q] = double(n_range[q]);
      ly[q] = std::log2(acc / double(idx.size()));
    }
    return ols_fit(lx, ly).slope;
  };
  for (std::size_t q = 0; q < nl; ++q) {
    xs[q] = double(n_range[q]);
    ys[q] = std::log2(out.mean_abs[q]);
  }
  out.log2_fit = ols_fit(xs, ys);
  RngStream boot_rng(seed ^ 0x626f6f74ULL, stream_base);
  out.boot = bootstrap_slope(ensemble, slope_of, boot_rng);
  return out;
}

BesovBoundEstimate besov_bound_estimate(const MultiplierSpec& spec, const ChargeParams& params,
                                        const std::vector<int>& n_range, std::size_t ensemble,
                                        const TorusGrid& grid, std::uint64_t seed,
                                        std::uint64_t stream_base, int workers) {
  const std::size_t nl = n_range.size();
  std::vector<double> norms(ensemble * nl, 0.0);
  parallel_for(ensemble, workers, [&](std::size_t r) {
    RngStream rng(seed, stream_base + r);
    const GffSample phi = sample_gff(grid, rng);
    for (std::size_t q = 0; q < nl; ++q) {
      const WickSample w = wick_exponential(phi.spectral, spec, n_range[q], params);
      const BesovNorm b = besov_norm(w.density, -params.beta, params.p, params.p);
      norms[r * nl + q] = std::pow(b.value, params.p);
    }
  });

  BesovBoundEstimate out;
  out.levels = n_range;
  out.mean_norm_p.resize(nl);
  out.stderr_.resize(nl);
  for (std::size_t q = 0; q < nl; ++q) {
    std::vector<double> col(ensemble);
    for (std::size_t r = 0; r < ensemble; ++r) col[r] = norms[r * nl + q];
    const Summary s = summarize(col);
    out.mean_norm_p[q] = s.mean;
    out.stderr_[q] = s.stderr_mean;
  }
  std::vector<double> sorted = out.mean_norm_p;
  std::sort(sorted.begin(), sorted.end());
  out.running_median = sorted[sorted.size() / 2];
  out.nondiverging = out.mean_norm_p.back() <= 2.0 * out.running_median;
  return out;
}

}  // namespace expphi2
