#include "expphi2/suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "expphi2/fft.hpp"
#include "expphi2/parallel.hpp"
#include "expphi2/solver.hpp"

namespace expphi2 {

IbpResult ibp_residual(const RunConfig& config, const CylinderFunctional& functional,
                       const RealConsElement& direction) {
  const TorusGrid grid(config.grid);
  const MultiplierSpec spec = config.multiplier_spec();
  const ChargeParams params = config.charge_params();
  const int n_level = config.n_levels.front();
  const std::size_t n = static_cast<std::size_t>(config.ensemble);

  // (D_H F, h) needs <l_j, h>; the CONS directions are orthonormal, so only
  // directions equal to h contribute
  std::vector<double> overlap(functional.directions.size(), 0.0);
  for (std::size_t j = 0; j < functional.directions.size(); ++j) {
    const auto& d = functional.directions[j];
    overlap[j] = (d.k1 == direction.k1 && d.k2 == direction.k2) ? 1.0 : 0.0;
  }
  const TorusField h_field = direction.field(grid);
  const double lambda_h = direction.lambda();
  // P_n e_k = psi(2^-n k) e_k (psi even)
  const auto& mask = pn_mask(spec, n_level, grid);
  const double psi_h =
      mask[static_cast<std::size_t>(grid.index_of_mode(direction.k1)) * grid.m() +
           grid.index_of_mode(direction.k2)];
  const double cell = grid.spacing() * grid.spacing();

  std::vector<double> lhs(n), rhs(n);
  parallel_for(n, config.workers, [&](std::size_t r) {
    RngStream rng(config.seed, r);
    const GffSample phi = sample_gff(grid, rng);
    const WickSample wick = wick_exponential(phi.spectral, spec, n_level, params);
    const double w = exp_measure_weight(wick);

    const auto grad = functional.gradient_coefficients(phi.spectral);
    double dh = 0.0;
    for (std::size_t j = 0; j < grad.size(); ++j) dh += grad[j] * overlap[j];
    lhs[r] = dh * w;

    double pairing_mh = 0.0;
    for (std::size_t i = 0; i < h_field.values.size(); ++i) {
      pairing_mh += wick.density.values[i] * h_field.values[i];
    }
    pairing_mh *= cell;
    const double lin = lambda_h * direction.pair(phi.spectral);
    const double fv = functional.value(phi.spectral);
    rhs[r] = fv * (lin + params.alpha * psi_h * pairing_mh) * w;
  });

  IbpResult out;
  std::vector<double> diff(n);
  for (std::size_t r = 0; r < n; ++r) diff[r] = lhs[r] - rhs[r];
  const Summary sl = summarize(lhs);
  const Summary sr = summarize(rhs);
  const Summary sd = summarize(diff);
  out.lhs = sl.mean;
  out.rhs = sr.mean;
  out.residual = sd.mean;
  out.stderr_ = sd.stderr_mean;
  out.residual_stderr_units = sd.stderr_mean > 0.0 ? sd.mean / sd.stderr_mean : 0.0;
  out.n = static_cast<std::int64_t>(n);
  return out;
}

namespace {

double field_total_mass(const SpectralCoeffs& phi, const MultiplierSpec& spec, int n_level,
                        const ChargeParams& params) {
  return wick_exponential(phi, spec, n_level, params).total_mass;
}

}  // namespace

InitialEnsemble importance_resample_initials(const RunConfig& config, std::size_t count) {
  const TorusGrid grid(config.grid);
  const MultiplierSpec spec = config.multiplier_spec();
  const ChargeParams params = config.charge_params();
  const int n_level = config.n_levels.front();

  std::vector<SpectralCoeffs> pool(count);
  std::vector<double> logw(count);
  parallel_for(count, config.workers, [&](std::size_t r) {
    RngStream rng(config.seed, r);
    GffSample phi = sample_gff(grid, rng);
    logw[r] = -field_total_mass(phi.spectral, spec, n_level, params);
    pool[r] = std::move(phi.spectral);
  });

  // normalize in log space; weights are bounded by 1 but can be tiny
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(count);
  for (std::size_t r = 0; r < count; ++r) w[r] = std::exp(logw[r] - top);
  const double ess = effective_sample_size(w);
  if (ess < 100.0) {
    std::ostringstream msg;
    msg << "importance resampling ESS = " << ess << " < 100 out of " << count
        << " candidates (weights too degenerate at alpha^2 = " << params.alpha2()
        << ", grid " << config.grid << ")";
    throw EffectiveSampleTooSmall(msg.str());
  }

  // systematic resampling, deterministic given the stream
  InitialEnsemble out;
  out.effective_sample_size = ess;
  double wsum = 0.0;
  for (double v : w) wsum += v;
  RngStream rng(config.seed ^ 0x7265736dULL, 0);
  const double u0 = rng.uniform() / double(count);
  std::vector<SpectralCoeffs> picked;
  picked.reserve(count);
  double cum = 0.0;
  std::size_t i = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double target = (u0 + double(j) / double(count)) * wsum;
    while (cum + w[i] < target && i + 1 < count) cum += w[i++];
    picked.push_back(pool[i]);
  }
  out.fields = std::move(picked);
  return out;
}

InitialEnsemble pcn_initials(const RunConfig& config, std::size_t count, int burn_in_steps,
                             double proposal_beta) {
  const TorusGrid grid(config.grid);
  const MultiplierSpec spec = config.multiplier_spec();
  const ChargeParams params = config.charge_params();
  const int n_level = config.n_levels.front();
  const double beta = proposal_beta;
  const double keep = std::sqrt(1.0 - beta * beta);

  InitialEnsemble out;
  out.fields.resize(count);
  std::vector<double> acc_rate(count, 0.0);
  parallel_for(count, config.workers, [&](std::size_t c) {
    RngStream rng(config.seed, 2 * c);
    RngStream prop_rng(config.seed, 2 * c + 1);
    GffSample state = sample_gff(grid, rng);
    double mass = field_total_mass(state.spectral, spec, n_level, params);
    int accepted = 0;
    for (int s = 0; s < burn_in_steps; ++s) {
      const GffSample xi = sample_gff(grid, prop_rng);
      SpectralCoeffs proposal(grid);
      for (std::size_t i = 0; i < proposal.coeffs.size(); ++i) {
        proposal.coeffs[i] = keep * state.spectral.coeffs[i] + beta * xi.spectral.coeffs[i];
      }
      const double mass_new = field_total_mass(proposal, spec, n_level, params);
      // pCN acceptance for target e^{-mass} d mu_0
      const double log_alpha = mass - mass_new;
      if (log_alpha >= 0.0 || std::log(prop_rng.uniform()) < log_alpha) {
        state.spectral = std::move(proposal);
        mass = mass_new;
        ++accepted;
      }
    }
    acc_rate[c] = double(accepted) / double(burn_in_steps);
    out.fields[c] = std::move(state.spectral);
  });
  double mean_acc = 0.0;
  for (double a : acc_rate) mean_acc += a;
  out.pcn_acceptance = mean_acc / double(count);
  return out;
}

EnsembleReport stationarity_suite(const RunConfig& config,
                                  const std::vector<CylinderFunctional>& functionals,
                                  InitSampler init) {
  if (config.solver_scheme() != SolverScheme::direct_expsqe2) {
    throw ConfigInvalid("stationarity_suite requires scheme = direct_expsqe2");
  }
  const MultiplierSpec spec = config.multiplier_spec();
  if (!spec.claims_hypothesis_P()) {
    throw ConfigInvalid("stationarity_suite needs a Hypothesis-1.6-claiming multiplier");
  }
  const TorusGrid grid(config.grid);
  const std::size_t count = static_cast<std::size_t>(config.ensemble);

  InitialEnsemble initials = (init == InitSampler::importance)
                                 ? importance_resample_initials(config, count)
                                 : pcn_initials(config, count);

  // evolve each replicate, recording functional values at {0, T/2, T}
  const double T = config.horizon;
  const std::size_t nf = functionals.size();
  std::vector<double> vals(count * nf * 3);
  parallel_for(count, config.workers, [&](std::size_t r) {
    SolverConfig sc;
    sc.params = config.charge_params();
    sc.spec = spec;
    sc.n_level = config.n_levels.front();
    sc.grid_m = config.grid;
    sc.dt = config.dt;
    sc.horizon = T;
    sc.scheme = SolverScheme::direct_expsqe2;
    sc.clamp_threshold = config.clamp_threshold;
    sc.snapshot_every = 0.5 * T;
    RngStream rng(config.seed ^ 0x65766f6cULL, r);
    const TorusField init_field = from_spectral_unchecked(initials.fields[r]);
    const SolverTrajectory traj = solve_direct(sc, init_field, rng);
    // snapshots: t = 0, T/2, T
    for (std::size_t t = 0; t < 3; ++t) {
      const SpectralCoeffs ph = to_spectral(traj.phi_snapshots.at(t));
      for (std::size_t f = 0; f < nf; ++f) {
        vals[(r * nf + f) * 3 + t] = functionals[f].value(ph);
      }
    }
  });

  // two-sample KS on disjoint halves: odd replicates at the earlier time vs
  // even replicates at the later time, per functional and time pair
  EnsembleReport rep;
  const std::array<std::array<std::size_t, 2>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
  std::vector<double> pvalues;
  std::vector<std::string> names;
  for (std::size_t f = 0; f < nf; ++f) {
    for (const auto& pr : pairs) {
      std::vector<double> a, b;
      for (std::size_t r = 0; r < count; ++r) {
        if (r % 2 == 0)
          a.push_back(vals[(r * nf + f) * 3 + pr[0]]);
        else
          b.push_back(vals[(r * nf + f) * 3 + pr[1]]);
      }
      pvalues.push_back(ks_two_sample_pvalue(a, b));
      names.push_back(functionals[f].description + " t" + std::to_string(pr[0]) + " vs t" +
                      std::to_string(pr[1]));
    }
  }
  const auto rejected = holm_bonferroni(pvalues, 0.001);
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    VerdictEntry e;
    e.name = "ks:" + names[i];
    e.estimate = pvalues[i];
    e.n = static_cast<std::int64_t>(count / 2);
    e.tolerance = "no Holm-Bonferroni rejection at p < 0.001";
    e.pass = !rejected[i];
    rep.entries.push_back(e);
  }
  VerdictEntry meta;
  meta.name = (init == InitSampler::importance) ? "importance_ess" : "pcn_acceptance";
  meta.estimate = (init == InitSampler::importance) ? initials.effective_sample_size
                                                    : initials.pcn_acceptance;
  meta.n = static_cast<std::int64_t>(count);
  meta.tolerance = (init == InitSampler::importance) ? ">= 100" : "in [0.10, 0.90]";
  meta.pass = (init == InitSampler::importance)
                  ? initials.effective_sample_size >= 100.0
                  : (initials.pcn_acceptance >= 0.10 && initials.pcn_acceptance <= 0.90);
  rep.entries.push_back(meta);
  return rep;
}

EnsembleReport psi_independence_suite(const RunConfig& config,
                                      const std::vector<MultiplierSpec>& specs,
                                      const std::vector<TorusField>& test_functions) {
  if (specs.size() < 2) throw ConfigInvalid("psi_independence_suite needs >= 2 specs");
  const TorusGrid grid(config.grid);
  const ChargeParams params = config.charge_params();
  const std::vector<int>& levels = config.n_levels;
  const std::size_t count = static_cast<std::size_t>(config.ensemble);
  const std::size_t nf = test_functions.size();
  const std::size_t nl = levels.size();
  const double cell = grid.spacing() * grid.spacing();

  // coupled: one phi per replicate shared by every spec and level
  // diff[r, f, l, pair] for consecutive spec pairs (0 vs 1, 1 vs 2, ...)
  const std::size_t npairs = specs.size() - 1;
  std::vector<double> diffs(count * nf * nl * npairs);
  parallel_for(count, config.workers, [&](std::size_t r) {
    RngStream rng(config.seed, r);
    const GffSample phi = sample_gff(grid, rng);
    // pairings[s*nf + f] at the current level
    std::vector<double> pairings(specs.size() * nf);
    for (std::size_t l = 0; l < nl; ++l) {
      for (std::size_t s = 0; s < specs.size(); ++s) {
        const WickSample w = wick_exponential(phi.spectral, specs[s], levels[l], params);
        for (std::size_t f = 0; f < nf; ++f) {
          double acc = 0.0;
          for (std::size_t i = 0; i < w.density.values.size(); ++i) {
            acc += w.density.values[i] * test_functions[f].values[i];
          }
          pairings[s * nf + f] = cell * acc;
        }
      }
      for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t pr = 0; pr < npairs; ++pr) {
          diffs[((r * nf + f) * nl + l) * npairs + pr] =
              pairings[pr * nf + f] - pairings[(pr + 1) * nf + f];
        }
      }
    }
  });

  EnsembleReport rep;
  for (std::size_t pr = 0; pr < npairs; ++pr) {
    for (std::size_t f = 0; f < nf; ++f) {
      std::vector<double> mean_abs(nl), stderrs(nl), means(nl);
      for (std::size_t l = 0; l < nl; ++l) {
        std::vector<double> col(count);
        for (std::size_t r = 0; r < count; ++r) {
          col[r] = diffs[((r * nf + f) * nl + l) * npairs + pr];
        }
        const Summary s = summarize(col);
        means[l] = s.mean;
        mean_abs[l] = std::fabs(s.mean);
        stderrs[l] = s.stderr_mean;
      }
      const bool shrink = mean_abs.back() <= mean_abs.front() + 2.0 * stderrs.front();
      const bool final_zero = mean_abs.back() <= 3.0 * stderrs.back();
      VerdictEntry e;
      e.name = specs[pr].name() + "_vs_" + specs[pr + 1].name() + "_f" + std::to_string(f);
      e.estimate = means.back();
      e.stderr_ = stderrs.back();
      e.ci_lo = means.back() - 2 * stderrs.back();
      e.ci_hi = means.back() + 2 * stderrs.back();
      e.n = static_cast<std::int64_t>(count);
      e.tolerance = "shrinking coupled difference; final within 3 stderr of 0";
      e.pass = shrink && final_zero;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

}  // namespace expphi2
