#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "expphi2/fft.hpp"
#include "expphi2/gff.hpp"
#include "expphi2/norms.hpp"
#include "expphi2/stats.hpp"

using namespace expphi2;

TEST_CASE("same (seed, stream) reproduces the sample bit for bit") {
  const TorusGrid g(32);
  RngStream a(99, 4), b(99, 4);
  const GffSample sa = sample_gff(g, a);
  const GffSample sb = sample_gff(g, b);
  for (std::size_t i = 0; i < sa.spectral.coeffs.size(); ++i) {
    CHECK(sa.spectral.coeffs[i] == sb.spectral.coeffs[i]);
  }
}

TEST_CASE("samples are Hermitian with a real zero mode and empty Nyquist rows") {
  const TorusGrid g(32);
  RngStream rng(1, 0);
  const GffSample s = sample_gff(g, rng);
  CHECK(s.spectral.hermitian_defect() == 0.0);
  CHECK(s.spectral.at_mode(0, 0).imag() == 0.0);
  for (int k = -16; k < 16; ++k) {
    CHECK(std::abs(s.spectral.at_mode(-16, k)) == 0.0);
    CHECK(std::abs(s.spectral.at_mode(k, -16)) == 0.0);
  }
}

TEST_CASE("mode variance matches (1+|k|^2)^{-1}") {
  const TorusGrid g(32);
  const std::size_t n = 20000;
  std::vector<double> re34(n), re00(n), prod(n);
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng(7, r);
    const GffSample s = sample_gff(g, rng);
    re34[r] = s.spectral.at_mode(3, 4).real();
    re00[r] = s.spectral.at_mode(0, 0).real();
    // cross moment of distinct modes
    prod[r] = s.spectral.at_mode(1, 0).real() * s.spectral.at_mode(2, 3).real();
  }
  const Summary s34 = summarize(re34);
  CHECK(std::fabs(s34.variance - 1.0 / 52.0) < 0.05 / 52.0);  // 1/(2*26) within 5%
  const Summary s00 = summarize(re00);
  CHECK(std::fabs(s00.variance - 1.0) < 0.05);
  const Summary sp = summarize(prod);
  CHECK(std::fabs(sp.mean) <= 3.0 * sp.stderr_mean);  // orthogonality
}

TEST_CASE("ou_step with noise disabled decays deterministically") {
  const TorusGrid g(16);
  RngStream rng(3, 0);
  OuState s;
  s.spectral = sample_gff(g, rng).spectral;
  OuNoise off;
  off.scale = 0.0;
  const OuState next = ou_step(s, 0.7, rng, off);
  for (int k1 = -7; k1 <= 7; ++k1) {
    for (int k2 = -7; k2 <= 7; ++k2) {
      const double lam = 1.0 + k1 * k1 + k2 * k2;
      const auto expect = s.spectral.at_mode(k1, k2) * std::exp(-0.5 * 0.7 * lam);
      CHECK(std::abs(next.spectral.at_mode(k1, k2) - expect) < 1e-14);
    }
  }
}

TEST_CASE("GFF measure is invariant under the flow (chi-square on 20 modes)") {
  const TorusGrid g(32);
  const std::size_t n = 20000;
  const std::vector<std::array<int, 2>> modes = {
      {0, 0}, {1, 0}, {0, 1},  {1, 1},  {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}, {3, 0},
      {3, 1}, {3, 4}, {4, 0},  {5, 2},  {6, 6}, {7, 0}, {8, 3}, {9, 9}, {10, 0}, {11, 5}};
  std::vector<std::vector<double>> re(modes.size(), std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng(11, r);
    OuState s;
    s.time = 0.0;
    s.spectral = sample_gff(g, rng).spectral;
    s = ou_step(s, 0.5, rng);
    s = ou_step(s, 0.5, rng);
    for (std::size_t q = 0; q < modes.size(); ++q) {
      re[q][r] = s.spectral.at_mode(modes[q][0], modes[q][1]).real();
    }
  }
  for (std::size_t q = 0; q < modes.size(); ++q) {
    const Summary s = summarize(re[q]);
    const int k1 = modes[q][0], k2 = modes[q][1];
    const double lam = 1.0 + k1 * k1 + k2 * k2;
    const double expect = (k1 == 0 && k2 == 0) ? 1.0 : 0.5 / lam;
    CHECK(variance_test_pvalue(s.variance, expect, n) > 0.001);
  }
}

TEST_CASE("marginal statistics at t = 1 are dt-invariant") {
  const TorusGrid g(16);
  const std::size_t n = 8000;
  std::vector<Summary> by_dt;
  for (const double dt : {1.0, 0.25, 0.0625}) {
    std::vector<double> re(n);
    for (std::size_t r = 0; r < n; ++r) {
      RngStream rng(13 + std::uint64_t(dt * 16), r);
      OuState s;
      s.spectral = sample_gff(g, rng).spectral;
      const int steps = static_cast<int>(std::lround(1.0 / dt));
      for (int i = 0; i < steps; ++i) s = ou_step(s, dt, rng);
      re[r] = s.spectral.at_mode(2, 1).real();
    }
    by_dt.push_back(summarize(re));
  }
  for (std::size_t i = 1; i < by_dt.size(); ++i) {
    const double se = std::sqrt(by_dt[i].variance / double(n) + by_dt[0].variance / double(n));
    CHECK(std::fabs(by_dt[i].mean - by_dt[0].mean) <= 3.0 * se);
    const double var_se =
        std::sqrt(2.0 / double(n)) * (by_dt[i].variance + by_dt[0].variance) * 0.5;
    CHECK(std::fabs(by_dt[i].variance - by_dt[0].variance) <= 3.0 * var_se);
  }
}

TEST_CASE("two half-steps match one full step in distribution") {
  const TorusGrid g(16);
  const std::size_t n = 8000;
  std::vector<double> one_step(n), two_steps(n);
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng_a(17, r);
    RngStream rng_b(18, r);
    OuState init;
    init.spectral = sample_gff(g, rng_a).spectral;
    const OuState full = ou_step(init, 0.5, rng_a);
    OuState half = ou_step(init, 0.25, rng_b);
    half = ou_step(half, 0.25, rng_b);
    one_step[r] = full.spectral.at_mode(1, 1).real();
    two_steps[r] = half.spectral.at_mode(1, 1).real();
  }
  const Summary a = summarize(one_step);
  const Summary b = summarize(two_steps);
  CHECK(std::fabs(a.mean - b.mean) <= 3.0 * std::sqrt(a.variance / n + b.variance / n));
  CHECK(std::fabs(a.variance - b.variance) <=
        3.0 * std::sqrt(2.0 / n) * 0.5 * (a.variance + b.variance));
}

TEST_CASE("trajectory contraction between initial conditions") {
  const TorusGrid g(32);
  SUBCASE("zero-mode difference decays exactly at rate 1/2") {
    TorusField a(g, 0.0), b(g, 1.0 / kTwoPi);  // differ by one k = 0 mode of size 1
    RngStream rng_a(21, 0), rng_b(21, 0);
    const auto ta = ou_trajectory(a, 1.0, 0.25, rng_a);
    const auto tb = ou_trajectory(b, 1.0, 0.25, rng_b);
    for (std::size_t i = 0; i < ta.size(); ++i) {
      const double diff =
          std::abs(tb[i].spectral.at_mode(0, 0) - ta[i].spectral.at_mode(0, 0));
      CHECK(diff == doctest::Approx(std::exp(-0.5 * ta[i].time)).epsilon(1e-12));
    }
  }
  SUBCASE("pathwise H^{-eps} contraction on 50 random pairs") {
    for (int pair = 0; pair < 50; ++pair) {
      RngStream init(23, pair);
      const TorusField f1 = from_spectral_unchecked(sample_gff(g, init).spectral);
      const TorusField f2 = from_spectral_unchecked(sample_gff(g, init).spectral);
      RngStream rng_a(24, pair), rng_b(24, pair);
      const auto t1 = ou_trajectory(f1, 0.5, 0.125, rng_a);
      const auto t2 = ou_trajectory(f2, 0.5, 0.125, rng_b);
      const double eps = 0.25;
      TorusField d0 = f1;
      for (std::size_t i = 0; i < d0.values.size(); ++i) d0.values[i] -= f2.values[i];
      const double base = sobolev_norm(d0, -eps);
      for (std::size_t i = 1; i < t1.size(); ++i) {
        SpectralCoeffs d = t1[i].spectral;
        for (std::size_t q = 0; q < d.coeffs.size(); ++q) d.coeffs[q] -= t2[i].spectral.coeffs[q];
        CHECK(sobolev_norm(d, -eps) <=
              std::exp(-0.5 * t1[i].time) * base * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("ou_trajectory validates the horizon") {
  const TorusGrid g(16);
  RngStream rng(1, 1);
  const TorusField f(g, 0.0);
  CHECK_THROWS_AS(ou_trajectory(f, 0.05, 0.1, rng), InvalidHorizon);
}

TEST_CASE("noise multiplier shapes the stationary variance") {
  // repeated stepping from zero with P_n-shaped noise reaches variance
  // psi(2^-n k)^2 / (1+|k|^2)
  const TorusGrid g(32);
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::smooth_bump);
  OuNoise noise;
  noise.spec = &spec;
  noise.n = 2;
  const std::size_t n = 20000;
  std::vector<double> probe(n);
  const int k1 = 3, k2 = 0;  // psi(3/4, 0) strictly between 0 and 1
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng(29, r);
    OuState s;
    s.spectral = SpectralCoeffs(g);
    for (int i = 0; i < 12; ++i) s = ou_step(s, 1.0, rng, noise);  // past mixing
    probe[r] = s.spectral.at_mode(k1, k2).real();
  }
  const double psi = spec.evaluate_radial(std::hypot(k1, k2) / 4.0);
  const double lam = 1.0 + k1 * k1 + k2 * k2;
  const double expect = 0.5 * psi * psi / lam;
  const Summary s = summarize(probe);
  CHECK(std::fabs(s.variance - expect) < 0.05 * expect);
}
