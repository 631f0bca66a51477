#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "expphi2/dyadic.hpp"
#include "expphi2/fft.hpp"
#include "expphi2/grid.hpp"
#include "expphi2/norms.hpp"
#include "expphi2/rng.hpp"

using namespace expphi2;

namespace {

// random real field band-limited to the resolved ball |k| <= r_max
TorusField random_band_limited(const TorusGrid& grid, double r_max, RngStream& rng) {
  SpectralCoeffs c(grid);
  const int R = static_cast<int>(r_max);
  for (int k1 = -R; k1 <= R; ++k1) {
    for (int k2 = -R; k2 <= R; ++k2) {
      if (k1 * k1 + k2 * k2 > r_max * r_max) continue;
      if (!grid.carries_mode(k1, k2)) continue;
      const bool positive = k1 > 0 || (k1 == 0 && k2 > 0);
      if (k1 == 0 && k2 == 0) {
        c.at_mode(0, 0) = rng.normal();
      } else if (positive) {
        const std::complex<double> v(rng.normal(), rng.normal());
        c.at_mode(k1, k2) = v;
        c.at_mode(-k1, -k2) = std::conj(v);
      }
    }
  }
  return from_spectral_unchecked(c);
}

}  // namespace

TEST_CASE("grid construction validates size") {
  CHECK_THROWS_AS(TorusGrid(12), ConfigInvalid);
  CHECK_THROWS_AS(TorusGrid(4), ConfigInvalid);
  const TorusGrid g(16);
  CHECK(g.spacing() == doctest::Approx(kTwoPi / 16));
  CHECK(g.mode_of_index(0) == 0);
  CHECK(g.mode_of_index(15) == -1);
  CHECK(g.mode_of_index(8) == -8);
  CHECK(g.index_of_mode(-1) == 15);
}

TEST_CASE("constant field transforms to a single 2pi zero mode") {
  const TorusGrid g(32);
  const TorusField one(g, 1.0);
  const SpectralCoeffs c = to_spectral(one);
  CHECK(c.at_mode(0, 0).real() == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(std::fabs(c.at_mode(0, 0).imag()) < 1e-12);
  double off = 0.0;
  for (int a = 0; a < 32; ++a) {
    for (int b = 0; b < 32; ++b) {
      if (a == 0 && b == 0) continue;
      off = std::max(off, std::abs(c.at_index(a, b)));
    }
  }
  CHECK(off < 1e-12);
}

TEST_CASE("cosine mode maps to a pi pair") {
  const TorusGrid g(32);
  TorusField f(g);
  for (int i = 0; i < 32; ++i) {
    const double x = g.node_coord(i);
    for (int j = 0; j < 32; ++j) f.at(i, j) = std::cos(x);
  }
  const SpectralCoeffs c = to_spectral(f);
  CHECK(c.at_mode(1, 0).real() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(c.at_mode(-1, 0).real() == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::abs(c.at_mode(0, 1)) < 1e-12);
}

TEST_CASE("from_spectral inverts to_spectral to 1e-12") {
  const TorusGrid g(64);
  RngStream rng(3, 0);
  const TorusField f = random_band_limited(g, 20.0, rng);
  const TorusField back = from_spectral(to_spectral(f));
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    dev = std::max(dev, std::fabs(f.values[i] - back.values[i]));
    scale = std::max(scale, std::fabs(f.values[i]));
  }
  CHECK(dev < 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("from_spectral spot checks") {
  const TorusGrid g(16);
  SpectralCoeffs c(g);
  c.at_mode(0, 0) = kTwoPi;
  TorusField f = from_spectral(c);
  for (double v : f.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  SpectralCoeffs c2(g);
  c2.at_mode(1, 0) = kPi;
  c2.at_mode(-1, 0) = kPi;
  f = from_spectral(c2);
  for (int i = 0; i < 16; ++i) {
    const double x = g.node_coord(i);
    CHECK(f.at(i, 3) == doctest::Approx(std::cos(x)).epsilon(1e-12));
  }

  const SpectralCoeffs zero(g);
  f = from_spectral(zero);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("corrupted spectral data raises SymmetryViolation") {
  const TorusGrid g(16);
  SpectralCoeffs c(g);
  c.at_mode(1, 0) = {1.0, 0.5};
  c.at_mode(-1, 0) = {1.0, 0.5};  // not the conjugate
  CHECK_THROWS_AS(from_spectral(c), SymmetryViolation);
}

TEST_CASE("Parseval holds to 1e-10 relative") {
  const TorusGrid g(64);
  RngStream rng(17, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const TorusField f = random_band_limited(g, 25.0, rng);
    const SpectralCoeffs c = to_spectral(f);
    double l2 = 0.0;
    for (double v : f.values) l2 += v * v;
    l2 *= g.spacing() * g.spacing();
    CHECK(c.parseval_sum() == doctest::Approx(l2).epsilon(1e-10));
  }
}

TEST_CASE("dyadic partition: supports and exact telescoping") {
  CHECK(DyadicPartition::chi(0.0) == 1.0);
  CHECK(DyadicPartition::chi(1.0) == 1.0);            // |k| = 1 sits in block -1
  CHECK(DyadicPartition::chi(4.0 / 3.0) == 0.0);
  CHECK(DyadicPartition::rho(0.74) == 0.0);           // below B(0, 3/4): zero
  CHECK(DyadicPartition::rho(1.0) == 0.0);
  CHECK(DyadicPartition::rho(2.0) == 1.0);            // |k| = 2 sits in block 0
  CHECK(DyadicPartition::rho(8.0 / 3.0) == 0.0);
  CHECK(DyadicPartition::rho(3.0) == 0.0);

  for (double r : {0.0, 0.3, 0.9, 1.1, 1.9, 2.7, 5.5, 17.3, 501.0, 9000.1}) {
    double sum = DyadicPartition::chi(r);
    for (int j = 0; j <= 16; ++j) sum += DyadicPartition::rho(std::ldexp(r, -j));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lp_block keeps |k|=1 in block -1 and |k|=2 in block 0") {
  const TorusGrid g(32);
  SpectralCoeffs c(g);
  c.at_mode(1, 0) = kPi;
  c.at_mode(-1, 0) = kPi;
  const TorusField whole = from_spectral(c);
  const TorusField blk = lp_block(c, -1);
  for (std::size_t i = 0; i < blk.values.size(); ++i) {
    CHECK(blk.values[i] == doctest::Approx(whole.values[i]).epsilon(1e-12));
  }

  SpectralCoeffs c2(g);
  c2.at_mode(2, 0) = kPi;
  c2.at_mode(-2, 0) = kPi;
  const TorusField whole2 = from_spectral(c2);
  const TorusField low = lp_block(c2, -1);
  for (double v : low.values) CHECK(std::fabs(v) < 1e-12);
  const TorusField blk0 = lp_block(c2, 0);
  for (std::size_t i = 0; i < blk0.values.size(); ++i) {
    CHECK(blk0.values[i] == doctest::Approx(whole2.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("blocks reconstruct resolved fields to 1e-10") {
  const TorusGrid g(64);
  CHECK(DyadicPartition::j_max(g) == 4);  // log2(32) - 1
  RngStream rng(11, 2);
  const TorusField f = random_band_limited(g, 32.0, rng);  // up to |k| = nyquist
  const SpectralCoeffs c = to_spectral(f);
  TorusField sum(g);
  for (int j = -1; j <= DyadicPartition::j_max(g); ++j) {
    const TorusField blk = lp_block(c, j);
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += blk.values[i];
  }
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    dev = std::max(dev, std::fabs(sum.values[i] - f.values[i]));
    scale = std::max(scale, std::fabs(f.values[i]));
  }
  CHECK(dev < 1e-10 * scale);
}

TEST_CASE("block above j_max raises") {
  const TorusGrid g(32);
  const SpectralCoeffs c(g);
  CHECK_THROWS_AS(lp_block(c, DyadicPartition::j_max(g) + 1), BlockAboveNyquist);
}

TEST_CASE("Besov norm of a constant field is 2^{-s} (4pi^2)^{1/p}") {
  const TorusGrid g(32);
  const TorusField one(g, 1.0);
  for (const double s : {-0.5, 0.25, 1.0}) {
    for (const double p : {1.0, 1.5, 2.0}) {
      const BesovNorm b = besov_norm(one, s, p, p);
      CHECK(b.value ==
            doctest::Approx(std::pow(2.0, -s) * std::pow(kTorusArea, 1.0 / p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Besov norm is homogeneous") {
  const TorusGrid g(64);
  RngStream rng(5, 3);
  const TorusField f = random_band_limited(g, 20.0, rng);
  TorusField scaled = f;
  for (auto& v : scaled.values) v *= -3.0;
  const double a = besov_norm(f, 0.4, 1.5, 2.0).value;
  const double b = besov_norm(scaled, 0.4, 1.5, 2.0).value;
  CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-12));
}

TEST_CASE("B^s_{2,2} vs H^s ratio stays in [1/4, 4]") {
  const TorusGrid g(64);
  RngStream rng(29, 4);
  for (const double s : {0.5, -0.75}) {
    for (int trial = 0; trial < 100; ++trial) {
      const TorusField f = random_band_limited(g, 24.0, rng);
      const double besov = besov_norm(f, s, 2.0, 2.0).value;
      const double sobolev = sobolev_norm(f, s);
      const double ratio = besov / sobolev;
      CHECK(ratio > 0.25);
      CHECK(ratio < 4.0);
    }
  }
}

TEST_CASE("Sobolev norm spot values and monotonicity") {
  const TorusGrid g(32);
  const TorusField one(g, 1.0);
  CHECK(sobolev_norm(one, 0.7) == doctest::Approx(kTwoPi).epsilon(1e-12));

  SpectralCoeffs c(g);
  c.at_mode(1, 0) = kPi;
  c.at_mode(-1, 0) = kPi;
  CHECK(sobolev_norm(c, 1.0) == doctest::Approx(kTwoPi).epsilon(1e-12));

  RngStream rng(31, 5);
  const TorusField f = random_band_limited(g, 10.0, rng);
  CHECK(sobolev_norm(f, -0.3) <= sobolev_norm(f, 0.1));
  CHECK(sobolev_norm(f, 0.1) <= sobolev_norm(f, 0.8));
}

TEST_CASE("interpolation inequality across theta") {
  const TorusGrid g(64);
  RngStream rng(41, 6);
  const double s1 = 0.5, s2 = -0.4;
  const double p1 = 2.0, p2 = 4.0 / 3.0;
  const double q1 = 2.0, q2 = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TorusField f = random_band_limited(g, 20.0, rng);
    const double n1 = besov_norm(f, s1, p1, q1).value;
    const double n2 = besov_norm(f, s2, p2, q2).value;
    for (const double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double s = (1 - theta) * s1 + theta * s2;
      const double p = 1.0 / ((1 - theta) / p1 + theta / p2);
      const double q = 1.0 / ((1 - theta) / q1 + theta / q2);
      const double lhs = besov_norm(f, s, p, q).value;
      const double rhs = std::pow(n1, 1 - theta) * std::pow(n2, theta);
      CHECK(lhs <= rhs * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("Besov embedding ratio is bounded (recorded band)") {
  // || f ||_{B^{s - 2(1/p1 - 1/p2)}_{p2, q}} <= C || f ||_{B^s_{p1, q}}
  const TorusGrid g(64);
  RngStream rng(43, 7);
  const double s = 0.5, p1 = 1.5, p2 = 3.0, q = 1.5;
  const double s2 = s - 2.0 * (1.0 / p1 - 1.0 / p2);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const TorusField f = random_band_limited(g, 20.0, rng);
    worst = std::max(worst, besov_norm(f, s2, p2, q).value / besov_norm(f, s, p1, q).value);
  }
  // measured band on this partition: ~0.16; asserting non-growth
  CHECK(worst < 1.0);
}

TEST_CASE("heat semigroup: identity, single-mode decay, L2 contraction") {
  const TorusGrid g(32);
  RngStream rng(47, 8);
  const TorusField f = random_band_limited(g, 10.0, rng);
  const TorusField same = heat_semigroup(f, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(same.values[i] == f.values[i]);

  const TorusField one(g, 1.0);
  const TorusField decayed = heat_semigroup(one, 2.0);
  for (double v : decayed.values) CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  for (const double t : {0.01, 0.1, 1.0}) {
    const TorusField ht = heat_semigroup(f, t);
    CHECK(lp_norm(ht, 2.0) <= std::exp(-0.5 * t) * lp_norm(f, 2.0) * (1.0 + 1e-12));
  }
}

TEST_CASE("heat semigroup smoothing sweep at delta = 1/2") {
  // || e^{t(lap-1)/2} f ||_{B^{s+1}} t^{1/2} / || f ||_{B^s} bounded over dyadic t
  const TorusGrid g(64);
  RngStream rng(53, 9);
  const double s = -0.5, p = 2.0, q = 2.0;
  double sup = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const TorusField f = random_band_limited(g, 28.0, rng);
    const double base = besov_norm(f, s, p, q).value;
    for (int e = 0; e <= 10; ++e) {
      const double t = std::ldexp(1.0, -e);
      const double smoothed = besov_norm(heat_semigroup(f, t), s + 1.0, p, q).value;
      sup = std::max(sup, smoothed * std::sqrt(t) / base);
    }
  }
  // measured constant ~1.1 on this partition; assert the band does not grow
  CHECK(sup < 4.0);
}
