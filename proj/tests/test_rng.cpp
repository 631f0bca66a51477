#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "expphi2/rng.hpp"
#include "expphi2/stats.hpp"

using namespace expphi2;

TEST_CASE("same (seed, stream) replays the identical sequence") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, 7), d(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("distinct stream ids decorrelate") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int same = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_u64() == b.next_u64()) ++same;
  }
  CHECK(same == 0);
}

TEST_CASE("distinct seeds decorrelate") {
  RngStream a(1, 0);
  RngStream b(2, 0);
  int same = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_u64() == b.next_u64()) ++same;
  }
  CHECK(same == 0);
}

TEST_CASE("philox block changes under counter and key increments") {
  const auto base = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(philox4x32({1, 0, 0, 0}, {0, 0}) != base);
  CHECK(philox4x32({0, 0, 1, 0}, {0, 0}) != base);
  CHECK(philox4x32({0, 0, 0, 0}, {1, 0}) != base);
}

TEST_CASE("uniforms live in (0, 1]") {
  RngStream rng(9, 3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("normal moments") {
  RngStream rng(123, 0);
  const int n = 200000;
  std::vector<double> z(n);
  for (auto& v : z) v = rng.normal();
  const Summary s = summarize(z);
  // 4-sigma bands
  CHECK(std::fabs(s.mean) < 4.0 / std::sqrt(double(n)));
  CHECK(std::fabs(s.variance - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
  // lag-1 autocorrelation
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) acc += z[i] * z[i + 1];
  CHECK(std::fabs(acc / double(n - 1)) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("uniform_below is unbiased over small ranges") {
  RngStream rng(5, 5);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) counts[rng.uniform_below(7)]++;
  for (int c : counts) {
    CHECK(std::fabs(c - n / 7.0) < 5.0 * std::sqrt(n / 7.0));
  }
}
