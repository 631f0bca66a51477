#include "expphi2/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "expphi2/fft.hpp"
#include "expphi2/gff.hpp"

namespace expphi2 {

std::string to_string(SolverScheme s) {
  switch (s) {
    case SolverScheme::split: return "split";
    case SolverScheme::direct_expsqe1: return "direct_expsqe1";
    case SolverScheme::direct_expsqe2: return "direct_expsqe2";
  }
  return "?";
}

SolverScheme solver_scheme_from_string(const std::string& name) {
  if (name == "split") return SolverScheme::split;
  if (name == "direct_expsqe1") return SolverScheme::direct_expsqe1;
  if (name == "direct_expsqe2") return SolverScheme::direct_expsqe2;
  throw ConfigInvalid("unknown scheme '" + name +
                      "' (expected split|direct_expsqe1|direct_expsqe2)");
}

void SolverConfig::validate() const {
  const TorusGrid g = grid();
  require_oversampling(spec, n_level, g);
  if (!(dt > 0.0)) throw ConfigInvalid("dt must be positive");
  if (dt > horizon) throw ConfigInvalid("dt must not exceed horizon");
  if (noise_substeps < 1) throw ConfigInvalid("noise_substeps must be >= 1");
  if (clamp_threshold <= 0.0) throw ConfigInvalid("clamp_threshold must be positive");
}

namespace {

// (e^z - 1)/z, series below 1e-5 to dodge cancellation (k=0 has z = -dt/2)
double phi1(double z) {
  if (std::fabs(z) < 1e-5) {
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 +
           z * (1.0 / 120.0 + z / 720.0))));
  }
  return std::expm1(z) / z;
}

struct ModeTables {
  std::vector<double> lambda;     // 1 + |k|^2 in index order
  std::vector<double> decay;      // e^{-dt lambda / 2}
  std::vector<double> dt_phi1;    // dt * phi1(-dt lambda / 2)
  std::vector<double> decay_fine; // e^{-dt_fine lambda / 2}
  std::vector<double> sd_fine;    // noise sd per fine substep (complex total)
};

ModeTables make_tables(const TorusGrid& grid, double dt, int substeps, double noise_scale,
                       const std::vector<double>* mask) {
  const int m = grid.m();
  ModeTables t;
  t.lambda.resize(grid.nodes());
  t.decay.resize(grid.nodes());
  t.dt_phi1.resize(grid.nodes());
  t.decay_fine.resize(grid.nodes());
  t.sd_fine.resize(grid.nodes());
  const double dt_fine = dt / substeps;
  for (int a = 0; a < m; ++a) {
    const double k1 = grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const double k2 = grid.mode_of_index(b);
      const std::size_t i = static_cast<std::size_t>(a) * m + b;
      const double lam = 1.0 + k1 * k1 + k2 * k2;
      t.lambda[i] = lam;
      t.decay[i] = std::exp(-0.5 * dt * lam);
      t.dt_phi1[i] = dt * phi1(-0.5 * dt * lam);
      t.decay_fine[i] = std::exp(-0.5 * dt_fine * lam);
      double sigma = noise_scale;
      if (mask != nullptr) sigma *= (*mask)[i];
      t.sd_fine[i] = sigma * std::sqrt((1.0 - std::exp(-dt_fine * lam)) / lam);
    }
  }
  return t;
}

// One step worth of integrated OU noise, built from `substeps` fine Gaussian
// blocks with exact decay weights; consumes the stream in the canonical order
// (zero mode, then the positive half-lattice), one fine substep at a time.
void accumulate_noise(const TorusGrid& grid, const ModeTables& t, int substeps, RngStream& rng,
                      SpectralCoeffs& eta) {
  std::fill(eta.coeffs.begin(), eta.coeffs.end(), std::complex<double>(0.0, 0.0));
  const int m = grid.m();
  const std::size_t i00 = static_cast<std::size_t>(grid.index_of_mode(0)) * m + grid.index_of_mode(0);
  for (int s = 0; s < substeps; ++s) {
    if (s > 0) {
      for (std::size_t i = 0; i < eta.coeffs.size(); ++i) eta.coeffs[i] *= t.decay_fine[i];
    }
    eta.coeffs[i00] += t.sd_fine[i00] * rng.normal();
    detail::for_each_positive_mode(grid, [&](int k1, int k2) {
      const std::size_t i =
          static_cast<std::size_t>(grid.index_of_mode(k1)) * m + grid.index_of_mode(k2);
      const auto z = rng.normal_pair();
      const double sd = t.sd_fine[i] * 0.70710678118654752440;
      const std::complex<double> val(sd * z[0], sd * z[1]);
      eta.coeffs[i] += val;
      const std::size_t ic =
          static_cast<std::size_t>(grid.index_of_mode(-k1)) * m + grid.index_of_mode(-k2);
      eta.coeffs[ic] += std::conj(val);
    });
  }
}

void check_exponent(double value, double threshold, const char* what) {
  if (!(value <= threshold) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "exponent " << what << " = " << value << " exceeds clamp threshold " << threshold
        << " (dt too large or parameters out of regime)";
    throw BlowUp(msg.str());
  }
}

struct SnapshotPlan {
  double every;
  double next = 0.0;
  bool due(double time, double horizon) {
    if (time <= 0.0) return true;
    if (time >= horizon - 1e-12) return true;
    if (every <= 0.0) return false;
    if (time + 1e-12 >= next) {
      while (next <= time + 1e-12) next += every;
      return true;
    }
    return false;
  }
};

}  // namespace

SolverTrajectory solve_split(const SolverConfig& config, const TorusField& initial_phi,
                             RngStream& rng) {
  config.validate();
  const TorusGrid grid = config.grid();
  const int n = config.n_level;
  const auto& mask = pn_mask(config.spec, n, grid);
  const double cn = renorm_constant_grid(config.spec, n, grid);
  const double alpha = config.params.alpha;
  const ModeTables t = make_tables(grid, config.dt, config.noise_substeps, config.noise_scale, &mask);
  const double cell = grid.spacing() * grid.spacing();

  SolverTrajectory traj;
  traj.config = config;

  // X_0 = P_N phi, Y_0 = 0
  SpectralCoeffs xh = apply_pn(config.spec, n, to_spectral(initial_phi));
  SpectralCoeffs yh(grid);
  TorusField x = from_spectral_unchecked(xh);
  TorusField y(grid);
  SpectralCoeffs eta(grid);
  SpectralCoeffs fh(grid);

  SnapshotPlan plan{config.snapshot_every};
  auto snapshot = [&](double time) {
    if (!plan.due(time, config.horizon)) return;
    traj.snapshot_times.push_back(time);
    TorusField phi(grid);
    for (std::size_t i = 0; i < phi.values.size(); ++i) phi.values[i] = x.values[i] + y.values[i];
    traj.phi_snapshots.push_back(std::move(phi));
    traj.x_snapshots.push_back(x);
    traj.y_snapshots.push_back(y);
  };
  snapshot(0.0);

  const auto steps = static_cast<std::size_t>(std::llround(config.horizon / config.dt));
  TorusField drift(grid);
  for (std::size_t s = 0; s < steps; ++s) {
    // nonlinearity F = -(alpha/2) e^{alpha Y} exp(alpha X - alpha^2 C_n / 2)
    StepDiagnostics diag;
    diag.time = (s + 1) * config.dt;
    double max_ay = -std::numeric_limits<double>::infinity();
    double l1 = 0.0;
    for (std::size_t i = 0; i < drift.values.size(); ++i) {
      const double ex = alpha * x.values[i] - 0.5 * alpha * alpha * cn;
      const double ey = alpha * y.values[i];
      check_exponent(ex, config.clamp_threshold, "alpha X - alpha^2 C/2");
      check_exponent(ey, config.clamp_threshold, "alpha Y");
      const double f = -0.5 * alpha * std::exp(ey) * std::exp(ex);
      drift.values[i] = f;
      l1 += std::fabs(f);
      max_ay = std::max(max_ay, ey);
    }
    diag.nonlinear_l1 = l1 * cell;
    diag.max_alpha_y = max_ay;
    traj.max_alpha_y_over_run = std::max(traj.max_alpha_y_over_run, max_ay);

    fh = to_spectral(drift);
    accumulate_noise(grid, t, config.noise_substeps, rng, eta);
    for (std::size_t i = 0; i < yh.coeffs.size(); ++i) {
      yh.coeffs[i] = t.decay[i] * yh.coeffs[i] + t.dt_phi1[i] * fh.coeffs[i];
      if (!config.freeze_x) {
        xh.coeffs[i] = t.decay[i] * xh.coeffs[i] + eta.coeffs[i];
      }
    }
    if (!config.freeze_x) x = from_spectral_unchecked(xh);
    y = from_spectral_unchecked(yh);
    traj.diagnostics.push_back(diag);
    snapshot(diag.time);
  }
  return traj;
}

SolverTrajectory solve_direct(const SolverConfig& config, const TorusField& initial_phi,
                              RngStream& rng) {
  config.validate();
  if (config.scheme == SolverScheme::split) {
    throw ConfigInvalid("solve_direct requires scheme direct_expsqe1 or direct_expsqe2");
  }
  const bool sqe2 = config.scheme == SolverScheme::direct_expsqe2;
  const TorusGrid grid = config.grid();
  const int n = config.n_level;
  const auto& mask = pn_mask(config.spec, n, grid);
  const double cn = renorm_constant_grid(config.spec, n, grid);
  const double alpha = config.params.alpha;
  // expsqe1 drives with P_N dW; expsqe2 with the full white noise
  const ModeTables t = make_tables(grid, config.dt, config.noise_substeps, config.noise_scale,
                                   sqe2 ? nullptr : &mask);
  const double cell = grid.spacing() * grid.spacing();

  SolverTrajectory traj;
  traj.config = config;
  traj.max_alpha_y_over_run = std::numeric_limits<double>::quiet_NaN();

  SpectralCoeffs ph = to_spectral(initial_phi);
  if (!sqe2) {
    for (std::size_t i = 0; i < ph.coeffs.size(); ++i) ph.coeffs[i] *= mask[i];
  }
  TorusField phi = from_spectral_unchecked(ph);

  SnapshotPlan plan{config.snapshot_every};
  auto snapshot = [&](double time) {
    if (!plan.due(time, config.horizon)) return;
    traj.snapshot_times.push_back(time);
    traj.phi_snapshots.push_back(phi);
  };
  snapshot(0.0);

  SpectralCoeffs eta(grid), gh(grid), uh(grid);
  TorusField work(grid);
  const auto steps = static_cast<std::size_t>(std::llround(config.horizon / config.dt));
  for (std::size_t s = 0; s < steps; ++s) {
    StepDiagnostics diag;
    diag.time = (s + 1) * config.dt;
    diag.max_alpha_y = std::numeric_limits<double>::quiet_NaN();

    const TorusField* u = &phi;
    if (sqe2) {
      uh = ph;
      for (std::size_t i = 0; i < uh.coeffs.size(); ++i) uh.coeffs[i] *= mask[i];
      work = from_spectral_unchecked(uh);
      u = &work;
    }
    double l1 = 0.0;
    TorusField expf(grid);
    for (std::size_t i = 0; i < expf.values.size(); ++i) {
      const double e = alpha * u->values[i] - 0.5 * alpha * alpha * cn;
      check_exponent(e, config.clamp_threshold, "alpha Phi - alpha^2 C/2");
      const double v = -0.5 * alpha * std::exp(e);
      expf.values[i] = v;
      l1 += std::fabs(v);
    }
    diag.nonlinear_l1 = l1 * cell;
    gh = to_spectral(expf);
    if (sqe2) {
      for (std::size_t i = 0; i < gh.coeffs.size(); ++i) gh.coeffs[i] *= mask[i];
    }
    accumulate_noise(grid, t, config.noise_substeps, rng, eta);
    for (std::size_t i = 0; i < ph.coeffs.size(); ++i) {
      ph.coeffs[i] = t.decay[i] * ph.coeffs[i] + t.dt_phi1[i] * gh.coeffs[i] + eta.coeffs[i];
    }
    phi = from_spectral_unchecked(ph);
    traj.diagnostics.push_back(diag);
    snapshot(diag.time);
  }
  return traj;
}

std::vector<TorusField> solve_shifted_deterministic(const SolverConfig& config,
                                                    const TorusField& upsilon0,
                                                    const ChiProvider& chi) {
  config.validate();
  const TorusGrid grid = config.grid();
  const double alpha = config.params.alpha;
  const ModeTables t = make_tables(grid, config.dt, 1, 0.0, nullptr);

  std::vector<TorusField> traj;
  SpectralCoeffs uh = to_spectral(upsilon0);
  TorusField u = from_spectral_unchecked(uh);
  traj.push_back(u);

  const auto steps = static_cast<std::size_t>(std::llround(config.horizon / config.dt));
  TorusField drift(grid);
  for (std::size_t s = 0; s < steps; ++s) {
    const TorusField chi_s = chi(s * config.dt);
    for (std::size_t i = 0; i < drift.values.size(); ++i) {
      if (chi_s.values[i] < 0.0) {
        throw ConfigInvalid("solve_shifted_deterministic requires chi >= 0");
      }
      const double e = alpha * u.values[i];
      check_exponent(e, config.clamp_threshold, "alpha Upsilon");
      drift.values[i] = -0.5 * alpha * std::exp(e) * chi_s.values[i];
    }
    const SpectralCoeffs fh = to_spectral(drift);
    for (std::size_t i = 0; i < uh.coeffs.size(); ++i) {
      uh.coeffs[i] = t.decay[i] * uh.coeffs[i] + t.dt_phi1[i] * fh.coeffs[i];
    }
    u = from_spectral_unchecked(uh);
    traj.push_back(u);
  }
  return traj;
}

std::vector<TorusField> solve_shifted_deterministic(const SolverConfig& config,
                                                    const TorusField& upsilon0,
                                                    const std::vector<TorusField>& chi_steps) {
  const double dt = config.dt;
  return solve_shifted_deterministic(config, upsilon0, [&](double time) {
    auto idx = static_cast<std::size_t>(std::llround(time / dt));
    idx = std::min(idx, chi_steps.size() - 1);
    return chi_steps[idx];
  });
}

double mild_form_residual(const SolverConfig& config, const TorusField& upsilon0,
                          const ChiProvider& chi, const std::vector<TorusField>& trajectory) {
  const TorusGrid grid = config.grid();
  const double alpha = config.params.alpha;
  const double T = config.horizon;
  const auto steps = trajectory.size() - 1;
  const double dt = config.dt;

  // integrand g(s) = e^{alpha Upsilon_s} chi_s, at the 2x finer grid by
  // linear interpolation between step values
  auto g_at_step = [&](std::size_t s) {
    const TorusField chi_s = chi(std::min(double(s) * dt, T));
    TorusField g(grid);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      g.values[i] = std::exp(alpha * trajectory[s].values[i]) * chi_s.values[i];
    }
    return g;
  };

  std::vector<SpectralCoeffs> g_hat;
  g_hat.reserve(steps + 1);
  for (std::size_t s = 0; s <= steps; ++s) g_hat.push_back(to_spectral(g_at_step(s)));

  // trapezoid on the half-step grid: nodes s_j = j dt/2, j = 0..2*steps
  const double h = 0.5 * dt;
  SpectralCoeffs acc(grid);
  const int m = grid.m();
  std::vector<double> lambda(grid.nodes());
  for (int a = 0; a < m; ++a) {
    const double k1 = grid.mode_of_index(a);
    for (int b = 0; b < m; ++b) {
      const double k2 = grid.mode_of_index(b);
      lambda[static_cast<std::size_t>(a) * m + b] = 1.0 + k1 * k1 + k2 * k2;
    }
  }
  const std::size_t nodes_count = 2 * steps;
  for (std::size_t j = 0; j <= nodes_count; ++j) {
    const double sj = j * h;
    const double w = (j == 0 || j == nodes_count) ? 0.5 * h : h;
    // linear interpolation of g_hat at half nodes
    const std::size_t lo = j / 2;
    const bool half = (j % 2) == 1;
    for (std::size_t i = 0; i < acc.coeffs.size(); ++i) {
      std::complex<double> gj = half
          ? 0.5 * (g_hat[lo].coeffs[i] + g_hat[lo + 1].coeffs[i])
          : g_hat[lo].coeffs[i];
      acc.coeffs[i] += w * std::exp(-0.5 * (T - sj) * lambda[i]) * gj;
    }
  }

  SpectralCoeffs res = to_spectral(trajectory.back());
  const SpectralCoeffs u0h = to_spectral(upsilon0);
  for (std::size_t i = 0; i < res.coeffs.size(); ++i) {
    res.coeffs[i] -= std::exp(-0.5 * T * lambda[i]) * u0h.coeffs[i];
    res.coeffs[i] += 0.5 * alpha * acc.coeffs[i];
  }
  return std::sqrt(res.parseval_sum());  // L^2 via Parseval
}

double uniqueness_probe(const SolverConfig& config, const TorusField& upsilon0,
                        const ChiProvider& chi, const std::vector<double>& dt_list) {
  if (dt_list.size() < 2) throw ConfigInvalid("uniqueness_probe needs >= 2 step sizes");
  std::vector<TorusField> finals;
  for (double dt : dt_list) {
    SolverConfig c = config;
    c.dt = dt;
    finals.push_back(solve_shifted_deterministic(c, upsilon0, chi).back());
  }
  double worst = 0.0;
  const double p = config.params.p;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    for (std::size_t j = i + 1; j < finals.size(); ++j) {
      TorusField d = finals[i];
      for (std::size_t q = 0; q < d.values.size(); ++q) d.values[q] -= finals[j].values[q];
      worst = std::max(worst, lp_norm(d, p));
    }
  }
  return worst;
}

}  // namespace expphi2
