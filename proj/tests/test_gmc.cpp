#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "expphi2/fft.hpp"
#include "expphi2/gff.hpp"
#include "expphi2/gmc.hpp"
#include "expphi2/stats.hpp"

using namespace expphi2;

namespace {
const MultiplierSpec kSquare = MultiplierSpec::make(MultiplierKind::sharp_square);
}

TEST_CASE("charge parameter windows are strict") {
  CHECK_NOTHROW(ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45));
  CHECK_THROWS_AS(ChargeParams::create(5.1, 1.5, 0.45), ConfigInvalid);   // above sqrt(8pi)
  CHECK_THROWS_AS(ChargeParams::create(1.0, 2.0, 0.4), ConfigInvalid);    // p not < 2
  CHECK_THROWS_AS(ChargeParams::create(1.0, 1.5, 0.9), ConfigInvalid);    // beta above window
  CHECK_THROWS_AS(ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.2), ConfigInvalid);  // below
  CHECK(ChargeParams::create(1.0, 1.5, 0.3).l2_regime());
  CHECK_FALSE(ChargeParams::create(4.0, 1.3, 0.6).l2_regime());
  for (const double alpha : {0.0, 1.0, 2.5, 4.9}) {
    const ChargeParams c = ChargeParams::defaults_for(alpha);
    CHECK(c.alpha == alpha);  // windows validated inside create
  }
}

TEST_CASE("zero charge gives the unit density") {
  const TorusGrid g(32);
  RngStream rng(1, 0);
  const GffSample phi = sample_gff(g, rng);
  const ChargeParams params = ChargeParams::create(0.0, 1.5, 0.3);
  const WickSample w = wick_exponential(phi.spectral, kSquare, 2, params);
  for (double v : w.density.values) CHECK(v == 1.0);
  CHECK(w.total_mass == doctest::Approx(kTorusArea).epsilon(1e-12));
  CHECK(w.clamp_events == 0);
}

TEST_CASE("Wick density has mean one and mass 4pi^2 on average") {
  const TorusGrid g(64);
  const ChargeParams params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
  const std::size_t n = 8000;
  std::vector<double> node(n), mass(n);
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng(31, r);
    const GffSample phi = sample_gff(g, rng);
    const WickSample w = wick_exponential(phi.spectral, kSquare, 2, params);
    node[r] = w.density.at(17, 5);
    mass[r] = w.total_mass;
  }
  const Summary sn = summarize(node);
  CHECK(std::fabs(sn.mean - 1.0) <= 3.0 * sn.stderr_mean);
  const Summary sm = summarize(mass);
  CHECK(std::fabs(sm.mean - kTorusArea) <= 3.0 * sm.stderr_mean);
}

TEST_CASE("nonnegativity of densities, masses and pairings") {
  const TorusGrid g(32);
  const ChargeParams params = ChargeParams::defaults_for(std::sqrt(kPi));
  for (int r = 0; r < 20; ++r) {
    RngStream rng(37, r);
    const GffSample phi = sample_gff(g, rng);
    const WickSample w = wick_exponential(phi.spectral, kSquare, 2, params);
    for (double v : w.density.values) CHECK(v >= 0.0);
    CHECK(w.total_mass >= 0.0);
    CHECK(ball_mass(w, {0.3, -0.8}, 0.5) >= 0.0);
  }
}

TEST_CASE("ball mass: caps, Lebesgue area, additivity") {
  const TorusGrid g(128);
  RngStream rng(2, 0);
  const GffSample phi = sample_gff(g, rng);
  const ChargeParams zero = ChargeParams::create(0.0, 1.5, 0.3);
  const WickSample w = wick_exponential(phi.spectral, kSquare, 2, zero);

  CHECK(ball_mass(w, {0.0, 0.0}, kPi * std::sqrt(2.0)) ==
        doctest::Approx(w.total_mass).epsilon(1e-12));

  for (const double radius : {0.5, 1.0, 2.0}) {
    const double mass = ball_mass(w, {0.7, -1.1}, radius);
    const double area = kPi * radius * radius;
    // one grid-cell band of boundary error
    const double band = kTwoPi * radius * g.spacing() * 2.0 + 4.0 * g.spacing() * g.spacing();
    CHECK(std::fabs(mass - area) <= band);
  }

  // disjoint balls: indicator sums equal the union's Riemann sum
  const double m1 = ball_mass(w, {-2.0, -2.0}, 0.4);
  const double m2 = ball_mass(w, {2.0, 2.0}, 0.4);
  double manual = 0.0;
  const double cell = g.spacing() * g.spacing();
  for (int i = 0; i < g.m(); ++i) {
    for (int j = 0; j < g.m(); ++j) {
      const double x = g.node_coord(i), y = g.node_coord(j);
      const bool in1 = torus_distance(x, y, -2.0, -2.0) <= 0.4;
      const bool in2 = torus_distance(x, y, 2.0, 2.0) <= 0.4;
      if (in1 || in2) manual += w.density.at(i, j);
    }
  }
  CHECK(m1 + m2 == doctest::Approx(cell * manual).epsilon(1e-12));

  CHECK_THROWS_AS(ball_mass(w, {0.0, 0.0}, 0.0), NonpositiveRadius);
}

TEST_CASE("exp measure weight") {
  const TorusGrid g(32);
  RngStream rng(5, 0);
  const GffSample phi = sample_gff(g, rng);
  const ChargeParams zero = ChargeParams::create(0.0, 1.5, 0.3);
  const WickSample w0 = wick_exponential(phi.spectral, kSquare, 2, zero);
  CHECK(exp_measure_weight(w0) == doctest::Approx(std::exp(-kTorusArea)).epsilon(1e-10));
  const ChargeParams params = ChargeParams::defaults_for(2.0);
  for (int r = 0; r < 50; ++r) {
    RngStream rr(7, r);
    const GffSample p = sample_gff(g, rr);
    const double wt = exp_measure_weight(wick_exponential(p.spectral, kSquare, 2, params));
    CHECK(wt > 0.0);
    CHECK(wt <= 1.0);
  }
}

TEST_CASE("clamped densities are flagged") {
  const TorusGrid g(32);
  SpectralCoeffs spike(g);
  spike.at_mode(0, 0) = 500.0;  // huge constant mode
  const ChargeParams params = ChargeParams::create(2.0, 1.5, 0.5);
  const WickSample w = wick_exponential(spike, kSquare, 2, params, 10.0);
  CHECK(w.clamp_events == static_cast<std::int64_t>(g.nodes()));
}

TEST_CASE("thick point fraction") {
  const ChargeParams zero = ChargeParams::create(0.0, 1.5, 0.3);
  SUBCASE("alpha = 0, delta = 0: about half the nodes are positive") {
    const TorusGrid g(256);
    RngStream rng(41, 0);
    const GffSample phi = sample_gff(g, rng);
    const double f = thick_point_fraction(phi.spectral, kSquare, 6, zero, 0.0);
    CHECK(std::fabs(f - 0.5) < 0.02);
  }
  SUBCASE("fractions stay in [0,1] and decrease with n in ensemble mean") {
    const TorusGrid g(256);
    const ChargeParams params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
    const std::vector<int> levels = {3, 4, 5, 6};
    std::vector<double> mean(levels.size(), 0.0);
    const int n = 200;
    for (int r = 0; r < n; ++r) {
      RngStream rng(43, r);
      const GffSample phi = sample_gff(g, rng);
      for (std::size_t q = 0; q < levels.size(); ++q) {
        const double f = thick_point_fraction(phi.spectral, kSquare, levels[q], params, 0.5);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        mean[q] += f / n;
      }
    }
    for (std::size_t q = 1; q < mean.size(); ++q) CHECK(mean[q] < mean[q - 1]);
  }
}

TEST_CASE("scaling exponent: Lebesgue case and input validation") {
  const TorusGrid g(128);
  const std::vector<double> radii = {0.125, 0.25, 0.5, 1.0};
  const ChargeParams zero = ChargeParams::create(0.0, 1.5, 0.3);
  const auto est =
      scaling_exponent_estimate(kSquare, 4, zero, 1.5, radii, 400, g, 47, 0, 2);
  CHECK(std::fabs(est.slope - 3.0) < 0.05);

  CHECK_THROWS_AS(
      scaling_exponent_estimate(kSquare, 4, zero, 1.5, {0.5, 1.0}, 10, g, 1, 0, 1),
      DegenerateRegression);
  CHECK_THROWS_AS(
      scaling_exponent_estimate(kSquare, 4, zero, 1.5, {0.5, 0.7, 1.0}, 10, g, 1, 0, 1),
      DegenerateRegression);  // span below one decade
  CHECK_THROWS_AS(
      scaling_exponent_estimate(kSquare, 5, zero, 1.5, {0.06, 0.125, 0.25, 0.5}, 10, g, 1, 0, 1),
      ConfigInvalid);  // cutoff scale too coarse for the smallest radius
}

TEST_CASE("coupled Cauchy differences vanish at alpha = 0") {
  const TorusGrid g(64);
  const ChargeParams zero = ChargeParams::create(0.0, 1.5, 0.3);
  const TorusField one(g, 1.0);
  const auto est = cauchy_decay_estimate(kSquare, zero, one, {2, 3}, 50, g, 51, 0, 2);
  for (double v : est.mean_abs) CHECK(v < 1e-12);
}

TEST_CASE("coupled Cauchy differences decrease at alpha^2 = 2pi (small run)") {
  const TorusGrid g(128);
  const ChargeParams params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
  const TorusField one(g, 1.0);
  const auto est = cauchy_decay_estimate(kSquare, params, one, {2, 3, 4}, 600, g, 53, 0, 2);
  CHECK(est.mean_abs[1] < est.mean_abs[0]);
  CHECK(est.mean_abs[2] < est.mean_abs[1]);
  CHECK(est.log2_fit.slope < 0.0);
}

TEST_CASE("Besov bound estimate is exactly flat at alpha = 0") {
  const TorusGrid g(64);
  const ChargeParams zero = ChargeParams::create(0.0, 1.5, 0.3);
  const auto est = besov_bound_estimate(kSquare, zero, {2, 3, 4}, 10, g, 57, 0, 2);
  // constant field: || 1 ||^p with only the j = -1 block
  const double expect = std::pow(std::pow(2.0, zero.beta) * std::pow(kTorusArea, 1.0 / zero.p),
                                 zero.p);
  for (double v : est.mean_norm_p) CHECK(v == doctest::Approx(expect).epsilon(1e-10));
  CHECK(est.nondiverging);
}

TEST_CASE("Besov bound stays controlled in the L1 regime (small run)") {
  const TorusGrid g(128);
  const ChargeParams params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
  const auto est = besov_bound_estimate(kSquare, params, {2, 3, 4, 5}, 200, g, 59, 0, 2);
  CHECK(est.nondiverging);
}

TEST_CASE("shift invariance of ball masses across centers") {
  const TorusGrid g(64);
  const ChargeParams params = ChargeParams::create(std::sqrt(kPi), 1.5, 0.3);
  const std::vector<std::array<double, 2>> centers = {
      {0.0, 0.0}, {1.0, 0.3}, {-2.0, 2.0}, {kPi - 0.1, -kPi + 0.1},
      {0.5, -1.5}, {-0.7, 0.9}, {2.2, 2.9}, {-3.0, -0.2}};
  const std::size_t n = 600;
  std::vector<std::vector<double>> masses(centers.size(), std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng(61, r);
    const GffSample phi = sample_gff(g, rng);
    const WickSample w = wick_exponential(phi.spectral, kSquare, 3, params);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      masses[c][r] = ball_mass(w, centers[c], 0.5);
    }
  }
  for (std::size_t c = 1; c < centers.size(); ++c) {
    CHECK(ks_two_sample_pvalue(masses[0], masses[c]) > 0.001);
  }
}

TEST_CASE("domination: C_N ordering under psi <= psibar transfers to densities") {
  // for the same phi, a pointwise larger multiplier gives a larger C_N
  const MultiplierSpec ball = MultiplierSpec::make(MultiplierKind::sharp_ball);
  const TorusGrid g(64);
  for (int n = 0; n <= 3; ++n) {
    CHECK(renorm_constant_grid(ball, n, g) <= renorm_constant_grid(kSquare, n, g));
  }
}

TEST_CASE("L^p moment of the total mass stays controlled over levels") {
  const TorusGrid g(128);
  const ChargeParams params = ChargeParams::create(std::sqrt(2.0 * kPi), 1.5, 0.45);
  const std::vector<int> levels = {2, 3, 4, 5};
  std::vector<double> moment(levels.size(), 0.0);
  const std::size_t n = 400;
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng(67, r);
    const GffSample phi = sample_gff(g, rng);
    for (std::size_t q = 0; q < levels.size(); ++q) {
      const WickSample w = wick_exponential(phi.spectral, kSquare, levels[q], params);
      moment[q] += std::pow(w.total_mass, params.p) / double(n);
    }
  }
  std::vector<double> sorted = moment;
  std::sort(sorted.begin(), sorted.end());
  CHECK(moment.back() <= 2.0 * sorted[sorted.size() / 2]);
}
