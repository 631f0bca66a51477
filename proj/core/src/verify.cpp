#include "expphi2/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "expphi2/ensemble.hpp"
#include "expphi2/fft.hpp"
#include "expphi2/gff.hpp"
#include "expphi2/gmc.hpp"
#include "expphi2/green.hpp"
#include "expphi2/parallel.hpp"
#include "expphi2/solver.hpp"
#include "expphi2/suites.hpp"

namespace expphi2 {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Chunked deterministic accumulation: replicates are processed in fixed
// contiguous chunks (each chunk sequential), chunks reduced in index order,
// so grid-sized accumulators stay bit-identical for any worker count.
template <typename PerReplicate>
void chunked_accumulate(std::size_t n, int workers, std::size_t n_chunks,
                        std::vector<std::vector<double>>& chunk_sums,
                        std::vector<std::vector<double>>& chunk_sumsq, std::size_t slots,
                        PerReplicate&& per_replicate) {
  chunk_sums.assign(n_chunks, std::vector<double>(slots, 0.0));
  chunk_sumsq.assign(n_chunks, std::vector<double>(slots, 0.0));
  std::vector<std::size_t> lo(n_chunks), hi(n_chunks);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    lo[c] = n * c / n_chunks;
    hi[c] = n * (c + 1) / n_chunks;
  }
  parallel_for(n_chunks, workers, [&](std::size_t c) {
    std::vector<double> buf(slots);
    for (std::size_t r = lo[c]; r < hi[c]; ++r) {
      per_replicate(r, buf);
      for (std::size_t i = 0; i < slots; ++i) {
        chunk_sums[c][i] += buf[i];
        chunk_sumsq[c][i] += buf[i] * buf[i];
      }
    }
  });
}

using Clock = std::chrono::steady_clock;

struct CriterionContext {
  VerifyOptions options;
  CriterionResult run(int id, const std::string& name,
                      const std::function<bool(std::vector<std::string>&)>& body) const {
    CriterionResult res;
    res.id = id;
    res.name = name;
    const auto t0 = Clock::now();
    try {
      res.pass = body(res.details);
    } catch (const std::exception& e) {
      res.pass = false;
      res.details.push_back(std::string("exception: ") + e.what());
    }
    res.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
  }
};

// ---------------------------------------------------------------------------
// 1. GFF covariance
// ---------------------------------------------------------------------------
bool criterion_gff_covariance(const VerifyOptions& opt, std::vector<std::string>& details) {
  const TorusGrid grid(256);
  const std::size_t ensemble = 20000;
  const std::vector<std::array<int, 2>> modes = {
      {0, 0},  {1, 0},  {0, 1},   {1, 1},  {2, 0},   {0, 2},  {2, 1},
      {2, 2},  {3, 0},  {3, 4},   {4, 0},  {5, 5},   {8, 0},  {10, 3},
      {16, 16}, {20, 0}, {31, 7}, {50, 50}, {80, 1}, {100, 100}};
  const std::size_t nm = modes.size();

  std::vector<std::vector<double>> sums, sumsqs;
  chunked_accumulate(ensemble, opt.workers, 16, sums, sumsqs, nm,
                     [&](std::size_t r, std::vector<double>& buf) {
                       RngStream rng(opt.seed, r);
                       const GffSample s = sample_gff(grid, rng);
                       for (std::size_t q = 0; q < nm; ++q) {
                         buf[q] = s.spectral.at_mode(modes[q][0], modes[q][1]).real();
                       }
                     });
  bool pass = true;
  for (std::size_t q = 0; q < nm; ++q) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < sums.size(); ++c) {
      s += sums[c][q];
      s2 += sumsqs[c][q];
    }
    const double mean = s / double(ensemble);
    const double var = (s2 - double(ensemble) * mean * mean) / double(ensemble - 1);
    const int k1 = modes[q][0], k2 = modes[q][1];
    const double lambda = 1.0 + double(k1) * k1 + double(k2) * k2;
    const double expect = (k1 == 0 && k2 == 0) ? 1.0 : 0.5 / lambda;
    const double rel = std::fabs(var - expect) / expect;
    if (rel > 0.05) {
      pass = false;
      details.push_back("mode (" + std::to_string(k1) + "," + std::to_string(k2) +
                        "): rel deviation " + fmt(rel) + " > 5%");
    }
  }
  details.push_back("20 modes x " + std::to_string(ensemble) +
                    " samples, Var(Re coeff) vs (1+|k|^2)^{-1}/2 within 5%");
  return pass;
}

// ---------------------------------------------------------------------------
// 2. Renormalization growth
// ---------------------------------------------------------------------------
bool criterion_renorm_growth(const VerifyOptions&, std::vector<std::string>& details) {
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  const double target = std::log(2.0) / kTwoPi;
  bool pass = true;
  std::vector<double> cn(10);
  for (int n = 4; n <= 8; ++n) cn[n] = renorm_constant(spec, n, 4 << n).value;
  for (int n = 4; n <= 7; ++n) {
    const double inc = cn[n + 1] - cn[n];
    const double rel = std::fabs(inc - target) / target;
    details.push_back("C_" + std::to_string(n + 1) + " - C_" + std::to_string(n) + " = " +
                      fmt(inc) + " (target " + fmt(target) + ", rel " + fmt(rel) + ")");
    if (rel > 0.05) pass = false;
  }
  return pass;
}

// ---------------------------------------------------------------------------
// 3. Wick mean-one
// ---------------------------------------------------------------------------
bool criterion_wick_mean_one(const VerifyOptions& opt, std::vector<std::string>& details) {
  const TorusGrid grid(256);
  const std::size_t ensemble = 20000;
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  bool pass = true;
  std::uint64_t stream_base = 0;
  for (const double a2 : {kPi, 2.0 * kPi, 3.0 * kPi}) {
    for (const int n : {3, 5}) {
      const ChargeParams params = ChargeParams::defaults_for(std::sqrt(a2));
      const std::size_t slots = grid.nodes();
      std::vector<std::vector<double>> sums, sumsqs;
      chunked_accumulate(ensemble, opt.workers, 8, sums, sumsqs, slots,
                         [&](std::size_t r, std::vector<double>& buf) {
                           RngStream rng(opt.seed, stream_base + r);
                           const GffSample phi = sample_gff(grid, rng);
                           const WickSample w = wick_exponential(phi.spectral, spec, n, params);
                           std::copy(w.density.values.begin(), w.density.values.end(), buf.begin());
                         });
      stream_base += ensemble;

      // node-averaged density (= total_mass / 4pi^2): per-replicate spatial
      // mean reconstructed from node sums
      double all = 0.0, node_fail = 0.0;
      std::vector<double> node_mean(slots), node_var(slots);
      for (std::size_t i = 0; i < slots; ++i) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t c = 0; c < sums.size(); ++c) {
          s += sums[c][i];
          s2 += sumsqs[c][i];
        }
        node_mean[i] = s / double(ensemble);
        node_var[i] = (s2 - double(ensemble) * node_mean[i] * node_mean[i]) / double(ensemble - 1);
        all += node_mean[i];
        const double se = std::sqrt(node_var[i] / double(ensemble));
        if (se > 0.0 && std::fabs(node_mean[i] - 1.0) > 3.0 * se) node_fail += 1.0;
      }
      const double frac_fail = node_fail / double(slots);
      const double grid_mean = all / double(slots);
      // stderr of the spatial mean: variance of per-replicate spatial means
      // is not tracked node-wise; bound it by the average node stderr scaled
      // conservatively by full spatial correlation
      double mean_node_var = 0.0;
      for (std::size_t i = 0; i < slots; ++i) mean_node_var += node_var[i];
      mean_node_var /= double(slots);
      const double se_upper = std::sqrt(mean_node_var / double(ensemble));
      const bool ok_mean = std::fabs(grid_mean - 1.0) <= 3.0 * se_upper;
      const bool ok_frac = frac_fail <= 0.02;
      if (!ok_mean || !ok_frac) pass = false;
      details.push_back("alpha^2=" + fmt(a2, 4) + " n=" + std::to_string(n) + ": grid mean " +
                        fmt(grid_mean) + " (3se band " + fmt(3.0 * se_upper) + "), node z>3 frac " +
                        fmt(frac_fail) + (ok_mean && ok_frac ? " ok" : " FAIL"));
    }
  }
  return pass;
}

// ---------------------------------------------------------------------------
// 4. Multifractal scaling
// ---------------------------------------------------------------------------
bool criterion_scaling(const VerifyOptions& opt, std::vector<std::string>& details) {
  const TorusGrid grid(256);
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  const std::vector<double> radii = {0.125, 0.25, 0.5, 1.0};
  const int n = 5;
  const std::size_t ensemble = 2000;
  const double p = 1.5;
  bool pass = true;

  {  // exact Lebesgue check at alpha = 0
    const ChargeParams params = ChargeParams::create(0.0, p, 0.3);
    const auto est = scaling_exponent_estimate(spec, n, params, p, radii, ensemble, grid,
                                               opt.seed, 0, opt.workers);
    const double dev = std::fabs(est.slope - 2.0 * p);
    details.push_back("alpha=0: slope " + fmt(est.slope) + " vs 2p=3 (|dev| " + fmt(dev) + ")");
    if (dev > 0.05) pass = false;
  }
  std::uint64_t base = ensemble;
  for (const double a2 : {2.0 * kPi, kPi}) {
    const double alpha = std::sqrt(a2);
    const ChargeParams params = ChargeParams::create(alpha, p, 0.45);
    const auto est = scaling_exponent_estimate(spec, n, params, p, radii, ensemble, grid,
                                               opt.seed, base, opt.workers);
    base += ensemble;
    const double xi = scaling_exponent_prediction(alpha, p);
    const double rel = std::fabs(est.slope - xi) / xi;
    details.push_back("alpha^2=" + fmt(a2, 4) + ": slope " + fmt(est.slope) + " +- " +
                      fmt(est.stderr_) + " vs xi(p)=" + fmt(xi) + " (rel " + fmt(rel) + ")");
    if (rel > 0.15 || est.clamp_events != 0) pass = false;
  }
  return pass;
}

// ---------------------------------------------------------------------------
// 5. Cauchy decay
// ---------------------------------------------------------------------------
bool criterion_cauchy(const VerifyOptions& opt, std::vector<std::string>& details) {
  const TorusGrid grid(512);
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  const ChargeParams params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
  const TorusField one(grid, 1.0);
  const std::vector<int> levels = {2, 3, 4, 5, 6};
  const std::size_t ensemble = 2000;
  const auto est = cauchy_decay_estimate(spec, params, one, levels, ensemble, grid, opt.seed, 0,
                                         opt.workers);
  bool monotone = true;
  for (std::size_t q = 0; q < est.levels.size(); ++q) {
    if (q > 0 && !(est.mean_abs[q] < est.mean_abs[q - 1])) monotone = false;
    details.push_back("N=" + std::to_string(est.levels[q]) + ": E|<1, M_{N+1}-M_N>| = " +
                      fmt(est.mean_abs[q]) + " +- " + fmt(est.stderr_[q]));
  }
  details.push_back("log2 slope " + fmt(est.boot.slope) + " (bootstrap 95% CI [" +
                    fmt(est.boot.ci_lo) + ", " + fmt(est.boot.ci_hi) + "])");
  const bool negative = est.boot.ci_hi < 0.0;
  if (!monotone) details.push_back("FAIL: not strictly decreasing");
  if (!negative) details.push_back("FAIL: slope CI not negative");
  return monotone && negative;
}

// ---------------------------------------------------------------------------
// 6. psi-independence
// ---------------------------------------------------------------------------
bool criterion_psi_independence(const VerifyOptions& opt, std::vector<std::string>& details) {
  RunConfig config;
  config.grid = 256;
  config.alpha = std::sqrt(2.0 * kPi);
  config.p = 1.5;
  config.beta = 0.45;
  config.n_levels = {3, 4, 5, 6};
  config.ensemble = 4000;
  config.seed = opt.seed;
  config.workers = opt.workers;
  const TorusGrid grid(config.grid);
  const TorusField one(grid, 1.0);
  const std::vector<MultiplierSpec> specs = {MultiplierSpec::make(MultiplierKind::sharp_square),
                                             MultiplierSpec::make(MultiplierKind::smooth_bump)};
  const EnsembleReport rep = psi_independence_suite(config, specs, {one});
  for (const auto& e : rep.entries) {
    details.push_back(e.name + ": final diff " + fmt(e.estimate) + " +- " + fmt(e.stderr_) +
                      (e.pass ? " ok" : " FAIL"));
  }
  return rep.all_pass();
}

// ---------------------------------------------------------------------------
// 7. Green kernel asymptotics
// ---------------------------------------------------------------------------
double kernel_oracle_gl(double r) {
  // composite 16-point Gauss-Legendre on t in [1, 40], independent of the
  // adaptive-Simpson path in kernel_k; the dropped tail is below 1e-12 of
  // the value for r >= 1e-4 ... bound added by the caller
  static const double xs[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double ws[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                               0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};
  const int panels = 156;  // 0.25-wide panels over [1, 40]
  const double a = 1.0, b = 40.0;
  const double hw = (b - a) / (2.0 * panels);
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (2 * p + 1) * hw;
    for (int i = 0; i < 8; ++i) {
      for (const double sgn : {-1.0, 1.0}) {
        const double t = mid + sgn * hw * xs[i];
        acc += ws[i] * hw * std::exp(-0.5 * r * (t + 1.0 / t)) / t;
      }
    }
  }
  return acc / kTwoPi;
}

bool criterion_kernel(const VerifyOptions&, std::vector<std::string>& details) {
  bool pass = true;
  // (a) oracle agreement at 20 radii
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = 0.05 + 0.35 * i;  // 0.05 .. 6.7
    const double tail = std::exp(-20.0 * r) / (20.0 * r);  // integral_40^inf bound
    const double dev = std::fabs(kernel_k(r) - kernel_oracle_gl(r)) - tail / kTwoPi;
    worst = std::max(worst, dev);
  }
  details.push_back("max |K - oracle| beyond tail bound: " + fmt(worst, 3));
  if (worst > 1e-8) pass = false;

  // (b) short-distance band
  double band_lo = 1e300, band_hi = -1e300;
  for (double r = 1e-4; r <= 0.99; r *= 1.15) {
    const double v = kernel_k(r) + std::log(r) / kTwoPi;
    band_lo = std::min(band_lo, v);
    band_hi = std::max(band_hi, v);
  }
  details.push_back("K + log(r)/2pi over [1e-4, 0.99]: [" + fmt(band_lo) + ", " + fmt(band_hi) + "]");
  if (std::max(std::fabs(band_lo), std::fabs(band_hi)) > 0.5) pass = false;

  // (c) exponential decay band
  double decay_hi = 0.0;
  for (double r = 1.0; r <= 20.0; r += 0.5) {
    decay_hi = std::max(decay_hi, kernel_k(r) * std::exp(0.5 * r));
  }
  details.push_back("max K e^{r/2} over [1, 20]: " + fmt(decay_hi));
  if (decay_hi > 0.25) pass = false;
  return pass;
}

// ---------------------------------------------------------------------------
// 8. G_{M,N} structure
// ---------------------------------------------------------------------------
bool criterion_green_structure(const VerifyOptions& opt, std::vector<std::string>& details) {
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  bool pass = true;

  {  // GN1 band at m = n = 5
    double band = 0.0;
    const int R = 4 << 5;
    for (double r = std::ldexp(1.0, -8); r <= 0.5; r *= 1.3) {
      for (const double ang : {0.0, 0.4, 1.1}) {
        const std::array<double, 2> d = {r * std::cos(ang), r * std::sin(ang)};
        const double g = green_mn(spec, 5, 5, d, R);
        const double ref = -std::log(std::max(r, std::ldexp(1.0, -5))) / kTwoPi;
        band = std::max(band, std::fabs(g - ref));
      }
    }
    details.push_back("GN1 band |G_55(d) + log(|d| v 2^-5)/2pi| max: " + fmt(band));
    if (band > 1.5) pass = false;
  }

  for (const double p : {1.0, 2.0}) {  // (A.2) decay in L^p
    std::vector<double> xs, ys;
    for (int n = 3; n <= 7; ++n) {
      const double v = green_diff_norm(spec, 3, n, p, 1024);
      xs.push_back(double(n));
      ys.push_back(std::log2(v));
    }
    const LineFit fit = ols_fit(xs, ys);
    details.push_back("green_diff_norm p=" + fmt(p, 2) + ": log2 slope " + fmt(fit.slope) +
                      " +- " + fmt(fit.slope_stderr));
    if (!(fit.slope + 2.0 * fit.slope_stderr < 0.0)) pass = false;
  }

  {  // Monte Carlo covariance crosscheck
    const TorusGrid grid(128);
    std::vector<std::array<double, 2>> disp = {
        {0.01, 0.0},  {0.05, 0.02}, {0.1, 0.0},  {0.0, 0.2},   {0.3, 0.3},  {0.5, 0.1},
        {0.7, -0.4},  {1.0, 0.0},   {1.5, 1.0},  {2.0, -1.0},  {2.5, 2.5},  {kPi, kPi}};
    const auto res = covariance_crosscheck(spec, 3, grid, disp, 20000, opt.seed, 0, opt.workers);
    details.push_back("covariance crosscheck: max deviation " + fmt(res.max_deviation_stderr_units) +
                      " stderr units");
    if (res.max_deviation_stderr_units > 4.0) pass = false;
  }
  return pass;
}

// ---------------------------------------------------------------------------
// 9. Solver sign invariant
// ---------------------------------------------------------------------------
bool criterion_sign_invariant(const VerifyOptions& opt, std::vector<std::string>& details) {
  bool pass = true;
  double worst = -1e300;
  int idx = 0;
  std::vector<SolverConfig> corpus;
  for (const double alpha : {0.5, 1.0, std::sqrt(kPi), 2.0, std::sqrt(2.0 * kPi)}) {
    for (const int n : {2, 3}) {
      for (const int gm : {64, 128}) {
        if (corpus.size() >= 20) break;
        SolverConfig c;
        c.params = ChargeParams::defaults_for(alpha);
        c.spec = MultiplierSpec::make((corpus.size() % 2 == 0) ? MultiplierKind::sharp_square
                                                               : MultiplierKind::smooth_bump);
        c.n_level = n;
        c.grid_m = gm;
        c.dt = (corpus.size() % 3 == 0) ? 5e-3 : 1e-2;
        c.horizon = 0.5;
        corpus.push_back(c);
      }
    }
  }
  std::vector<double> max_ay(corpus.size());
  parallel_for(corpus.size(), opt.workers, [&](std::size_t i) {
    RngStream rng(opt.seed, 1000 + i);
    RngStream init_rng(opt.seed, 2000 + i);
    const GffSample phi = sample_gff(corpus[i].grid(), init_rng);
    const TorusField f0 = from_spectral_unchecked(phi.spectral);
    const SolverTrajectory traj = solve_split(corpus[i], f0, rng);
    max_ay[i] = traj.max_alpha_y_over_run;
  });
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    worst = std::max(worst, max_ay[i]);
    if (!(max_ay[i] <= 1e-6)) {
      pass = false;
      details.push_back("config " + std::to_string(idx) + ": max alpha Y = " + fmt(max_ay[i]));
    }
    ++idx;
  }
  details.push_back(std::to_string(corpus.size()) + " configs, worst max alpha Y = " + fmt(worst));
  return pass;
}

// ---------------------------------------------------------------------------
// 10. Solver correctness oracles
// ---------------------------------------------------------------------------
double ode_oracle_rk4(double alpha, double kappa, double T, double y0, int steps) {
  // classic RK4 at a step fine enough to be an independent 1e-9 reference
  const double h = T / steps;
  auto f = [&](double y) { return -0.5 * y - 0.5 * alpha * std::exp(alpha * y) * kappa; };
  double y = y0;
  for (int s = 0; s < steps; ++s) {
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

bool criterion_solver_oracles(const VerifyOptions& opt, std::vector<std::string>& details) {
  bool pass = true;

  {  // (a) frozen-field scalar ODE
    const double alpha = std::sqrt(kPi);
    const double c = 0.2;
    SolverConfig sc;
    sc.params = ChargeParams::defaults_for(alpha);
    sc.spec = MultiplierSpec::make(MultiplierKind::sharp_square);
    sc.n_level = 2;
    sc.grid_m = 16;
    sc.dt = 2e-6;
    sc.horizon = 1.0;
    sc.noise_scale = 0.0;
    sc.freeze_x = true;
    const TorusGrid grid = sc.grid();
    const double cn = renorm_constant_grid(sc.spec, sc.n_level, grid);
    const double kappa = std::exp(alpha * c - 0.5 * alpha * alpha * cn);
    RngStream rng(opt.seed, 0);
    const SolverTrajectory traj = solve_split(sc, TorusField(grid, c), rng);
    const double y_solver = traj.y_snapshots.back().values[0];
    const double y_ref = ode_oracle_rk4(alpha, kappa, 1.0, 0.0, 200000);
    const double dev = std::fabs(y_solver - y_ref);
    details.push_back("frozen-field ODE: |y_solver - y_oracle| = " + fmt(dev, 3));
    if (dev > 1e-6) pass = false;
  }

  {  // (b) chi = 0 linear flow exactness
    SolverConfig sc;
    sc.params = ChargeParams::defaults_for(1.0);
    sc.spec = MultiplierSpec::make(MultiplierKind::sharp_square);
    sc.n_level = 2;
    sc.grid_m = 32;
    sc.dt = 0.01;
    sc.horizon = 1.0;
    RngStream rng(opt.seed, 7);
    const GffSample u0s = sample_gff(sc.grid(), rng);
    const TorusField u0 = from_spectral_unchecked(u0s.spectral);
    const TorusGrid grid = sc.grid();
    const auto traj =
        solve_shifted_deterministic(sc, u0, [&](double) { return TorusField(grid, 0.0); });
    const TorusField exact = from_spectral_unchecked(heat_semigroup(to_spectral(u0), 1.0));
    double dev = 0.0;
    for (std::size_t i = 0; i < exact.values.size(); ++i) {
      dev = std::max(dev, std::fabs(exact.values[i] - traj.back().values[i]));
    }
    details.push_back("chi=0 linear flow max deviation: " + fmt(dev, 3));
    if (dev > 1e-12) pass = false;
  }

  {  // (c) split vs direct pathwise agreement
    SolverConfig sc;
    sc.params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
    sc.spec = MultiplierSpec::make(MultiplierKind::sharp_square);
    sc.n_level = 3;
    sc.grid_m = 128;
    sc.dt = 1e-3;
    sc.horizon = 1.0;
    RngStream init_rng(opt.seed, 11);
    const GffSample phi = sample_gff(sc.grid(), init_rng);
    const TorusField f0 = from_spectral_unchecked(phi.spectral);
    RngStream rng_a(opt.seed, 12);
    const SolverTrajectory split = solve_split(sc, f0, rng_a);
    SolverConfig sd = sc;
    sd.scheme = SolverScheme::direct_expsqe1;
    RngStream rng_b(opt.seed, 12);  // same stream -> same noise path
    const SolverTrajectory direct = solve_direct(sd, f0, rng_b);
    TorusField diff = split.phi_final();
    const TorusField& other = direct.phi_final();
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= other.values[i];
    const double rel = lp_norm(diff, 2.0) / lp_norm(other, 2.0);
    details.push_back("split vs direct1 relative L2 at t=1: " + fmt(rel, 3));
    if (rel > 1e-3) pass = false;
  }

  {  // (d) dt-halving contraction with shared fine noise
    SolverConfig base;
    base.params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
    base.spec = MultiplierSpec::make(MultiplierKind::sharp_square);
    base.n_level = 2;
    base.grid_m = 64;
    base.horizon = 0.5;
    RngStream init_rng(opt.seed, 21);
    const GffSample phi = sample_gff(base.grid(), init_rng);
    const TorusField f0 = from_spectral_unchecked(phi.spectral);
    const double dt_fine = 2e-3;
    std::vector<TorusField> finals;
    for (const int mult : {4, 2, 1}) {
      SolverConfig sc = base;
      sc.dt = dt_fine * mult;
      sc.noise_substeps = mult;  // coarse steps consume the fine noise blocks
      RngStream rng(opt.seed, 22);
      finals.push_back(solve_split(sc, f0, rng).phi_final());
    }
    auto dist = [](const TorusField& a, const TorusField& b) {
      TorusField d = a;
      for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
      return lp_norm(d, 2.0);
    };
    const double e1 = dist(finals[0], finals[1]);
    const double e2 = dist(finals[1], finals[2]);
    const double factor = e1 / e2;
    details.push_back("dt-halving: e(4dt,2dt)=" + fmt(e1, 4) + " e(2dt,dt)=" + fmt(e2, 4) +
                      " factor " + fmt(factor, 4));
    if (!(factor >= 1.7)) pass = false;
  }
  return pass;
}

// ---------------------------------------------------------------------------
// 11. Integration-by-parts residual
// ---------------------------------------------------------------------------
bool criterion_ibp(const VerifyOptions& opt, std::vector<std::string>& details) {
  bool pass = true;
  const RealConsElement e10{1, 0}, e01{0, 1}, s10{-1, 0}, e11{1, 1};
  struct Pair {
    CylinderFunctional f;
    RealConsElement h;
  };
  const std::vector<Pair> pairs = {
      {make_functional(OuterKind::tanh_sum, {e10}), e10},
      {make_functional(OuterKind::tanh_sum, {e01}), e01},
      {make_functional(OuterKind::cos_sum, {e10}), e10},
      {make_functional(OuterKind::poly2, {e10, s10}), e10},
      {make_functional(OuterKind::tanh_sum, {e10}), e01},  // h orthogonal to F
      {make_functional(OuterKind::poly2, {e11}), e11},
  };
  for (const double a2 : {0.0, kPi, 2.0 * kPi}) {
    RunConfig config;
    config.grid = 64;
    config.alpha = std::sqrt(a2);
    const ChargeParams defaults = ChargeParams::defaults_for(config.alpha);
    config.p = defaults.p;
    config.beta = defaults.beta;
    config.n_levels = {3};
    config.ensemble = 50000;
    config.seed = opt.seed + static_cast<std::uint64_t>(a2 * 1000);
    config.workers = opt.workers;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const IbpResult res = ibp_residual(config, pairs[i].f, pairs[i].h);
      const double z = res.residual_stderr_units;
      if (std::fabs(z) > 4.0) {
        pass = false;
        details.push_back("alpha^2=" + fmt(a2, 3) + " pair " + std::to_string(i) +
                          ": residual z = " + fmt(z) + " FAIL");
      }
    }
    details.push_back("alpha^2=" + fmt(a2, 3) + ": 6 (F,h) pairs within 4 stderr");
  }
  return pass;
}

// ---------------------------------------------------------------------------
// 12. Stationarity
// ---------------------------------------------------------------------------
bool criterion_stationarity(const VerifyOptions& opt, std::vector<std::string>& details) {
  RunConfig config;
  config.grid = 128;
  config.alpha = std::sqrt(kPi);
  const ChargeParams defaults = ChargeParams::defaults_for(config.alpha);
  config.p = defaults.p;
  config.beta = defaults.beta;
  config.multiplier = "smooth_bump";
  config.n_levels = {3};
  config.dt = 0.01;
  config.horizon = 1.0;
  config.ensemble = 1000;
  config.seed = opt.seed;
  config.scheme = "direct_expsqe2";
  config.workers = opt.workers;
  // the spec'd importance resampler is degenerate at this charge (see ledger);
  // initial data come from the exact pCN sampler for the same measure
  const EnsembleReport rep =
      stationarity_suite(config, default_functional_family(), InitSampler::pcn);
  int rejections = 0;
  for (const auto& e : rep.entries) {
    if (!e.pass) {
      ++rejections;
      details.push_back(e.name + ": " + fmt(e.estimate) + " (" + e.tolerance + ") FAIL");
    }
  }
  details.push_back("10 functionals x 3 time pairs, Holm-Bonferroni p<0.001: " +
                    std::to_string(rejections) + " rejections");
  for (const auto& e : rep.entries) {
    if (e.name == "pcn_acceptance") {
      details.push_back("pCN acceptance rate " + fmt(e.estimate, 3));
    }
  }
  return rep.all_pass();
}

// ---------------------------------------------------------------------------
// 13. Engineering determinism
// ---------------------------------------------------------------------------
bool criterion_determinism(const VerifyOptions& opt, std::vector<std::string>& details) {
  RunConfig config;
  config.grid = 64;
  config.alpha = std::sqrt(kPi);
  const ChargeParams defaults = ChargeParams::defaults_for(config.alpha);
  config.p = defaults.p;
  config.beta = defaults.beta;
  config.n_levels = {2, 3};
  config.ensemble = 400;
  config.seed = opt.seed;

  bool pass = true;
  for (const std::string task : {"wick-mass", "cauchy", "gff-covariance"}) {
    RunConfig c1 = config;
    c1.workers = 1;
    RunConfig c8 = config;
    c8.workers = 8;
    const std::string b1 = run_ensemble(c1, task).body_json();
    const std::string b8 = run_ensemble(c8, task).body_json();
    const bool same = b1 == b8;
    details.push_back("task " + task + ": bodies " + (same ? "identical" : "DIFFER"));
    if (!same) pass = false;
  }
  return pass;
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.pass; });
}

std::string VerifyReport::to_json() const {
  ordered_json j;
  j["schema_version"] = 1;
  ordered_json arr = ordered_json::array();
  for (const auto& c : criteria) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["details"] = c.details;
    arr.push_back(jc);
  }
  j["criteria"] = arr;
  j["all_pass"] = all_pass();
  ordered_json timing = ordered_json::array();
  for (const auto& c : criteria) {
    timing.push_back({{"id", c.id}, {"elapsed_seconds", c.elapsed_seconds}});
  }
  j["timing"] = timing;
  return j.dump(2);
}

std::string VerifyReport::summary_lines() const {
  std::ostringstream os;
  for (const auto& c : criteria) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " ("
       << fmt(c.elapsed_seconds, 3) << "s)";
    if (!c.pass && !c.details.empty()) os << " -- " << c.details.back();
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> verify_plan() {
  return {
      "1 gff-covariance: grid 256, 20000 samples, 20 modes within 5%",
      "2 renorm-growth: sharp_square C_{N+1}-C_N vs log2/2pi, N in {4..7}, 5%",
      "3 wick-mean-one: grid 256, 20000 samples, alpha^2 in {pi,2pi,3pi}, n in {3,5}",
      "4 multifractal-scaling: grid 256, n=5, ensemble 2000, xi(p) within 15%; alpha=0 slope 2p +- 0.05",
      "5 cauchy-decay: grid 512, alpha^2=2pi, N in {2..6}, coupled, negative slope at 95%",
      "6 psi-independence: sharp_square vs smooth_bump, alpha^2=2pi, terminal diff within 3 stderr",
      "7 green-kernel: oracle 1e-8 at 20 radii; bands on [1e-4,0.99] and [1,20]",
      "8 green-structure: GN1 band <= 1.5; diff-norm slopes negative (p=1,2); crosscheck 4 stderr",
      "9 sign-invariant: 20-config corpus, max alpha Y <= 1e-6",
      "10 solver-oracles: ODE 1e-6; linear flow 1e-12; split-vs-direct 1e-3; dt factor >= 1.7",
      "11 ibp-residual: grid 64, n=3, ensemble 50000, 6 pairs x alpha^2 in {0,pi,2pi}, 4 stderr",
      "12 stationarity: grid 128, alpha^2=pi, n=3, expsqe2, Holm p<0.001 over 10 functionals",
      "13 determinism: identical report bodies across worker counts 1 vs 8",
  };
}

VerifyReport verify_all(const VerifyOptions& options) {
  VerifyReport report;
  const CriterionContext ctx{options};
  auto wanted = [&](int id) {
    return options.only.empty() ||
           std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };

  struct Entry {
    int id;
    const char* name;
    std::function<bool(const VerifyOptions&, std::vector<std::string>&)> fn;
  };
  const std::vector<Entry> entries = {
      {1, "gff-covariance", criterion_gff_covariance},
      {2, "renorm-growth", criterion_renorm_growth},
      {3, "wick-mean-one", criterion_wick_mean_one},
      {4, "multifractal-scaling", criterion_scaling},
      {5, "cauchy-decay", criterion_cauchy},
      {6, "psi-independence", criterion_psi_independence},
      {7, "green-kernel", criterion_kernel},
      {8, "green-structure", criterion_green_structure},
      {9, "sign-invariant", criterion_sign_invariant},
      {10, "solver-oracles", criterion_solver_oracles},
      {11, "ibp-residual", criterion_ibp},
      {12, "stationarity", criterion_stationarity},
      {13, "determinism", criterion_determinism},
  };
  for (const auto& e : entries) {
    if (!wanted(e.id)) continue;
    report.criteria.push_back(ctx.run(e.id, e.name, [&](std::vector<std::string>& d) {
      return e.fn(options, d);
    }));
  }

  if (!options.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    std::ofstream(fs::path(options.out_dir) / "report.json") << report.to_json();
    fs::create_directories(fs::path(options.out_dir) / "tables");
    std::ofstream csv(fs::path(options.out_dir) / "tables" / "criteria.csv");
    csv << "id,name,pass,elapsed_seconds\n";
    for (const auto& c : report.criteria) {
      csv << c.id << "," << c.name << "," << (c.pass ? 1 : 0) << "," << c.elapsed_seconds << "\n";
    }
  }
  return report;
}

}  // namespace expphi2
