#include "expphi2/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "expphi2/errors.hpp"

namespace expphi2 {

Summary summarize(const std::vector<double>& x) {
  Summary s;
  s.n = x.size();
  if (x.empty()) return s;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= double(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.variance = x.size() > 1 ? ss / double(x.size() - 1) : 0.0;
  s.stderr_mean = x.size() > 1 ? std::sqrt(s.variance / double(x.size())) : 0.0;
  return s;
}

LineFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw DegenerateRegression("ols_fit needs >= 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateRegression("ols_fit: zero x-variance");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  f.slope_stderr = n > 2 ? std::sqrt(ssr / double(n - 2) / sxx) : 0.0;
  return f;
}

BootstrapSlope bootstrap_slope(std::size_t n_replicates,
                               const std::function<double(const std::vector<std::size_t>&)>& stat,
                               RngStream& rng, int n_boot) {
  std::vector<std::size_t> idx(n_replicates);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  BootstrapSlope out;
  out.slope = stat(idx);

  std::vector<double> slopes;
  slopes.reserve(n_boot);
  std::vector<std::size_t> pick(n_replicates);
  for (int b = 0; b < n_boot; ++b) {
    for (std::size_t i = 0; i < n_replicates; ++i) pick[i] = rng.uniform_below(n_replicates);
    slopes.push_back(stat(pick));
  }
  const Summary s = summarize(slopes);
  out.stderr_ = std::sqrt(s.variance);
  std::sort(slopes.begin(), slopes.end());
  const auto at = [&](double q) {
    const double pos = q * double(slopes.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, slopes.size() - 1);
    const double w = pos - double(lo);
    return (1.0 - w) * slopes[lo] + w * slopes[hi];
  };
  out.ci_lo = at(0.025);
  out.ci_hi = at(0.975);
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) throw ConfigInvalid("normal_quantile needs p in (0,1)");
  // bisection on the cdf; plenty fast for test-time use
  double lo = -12.0, hi = 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigInvalid("ks test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = double(i) / double(a.size());
    const double fb = double(j) / double(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  const double ne = double(a.size()) * double(b.size()) / double(a.size() + b.size());
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  // Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
  double p = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * double(j) * j * lambda * lambda);
    p += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  p *= 2.0;
  return std::clamp(p, 0.0, 1.0);
}

double variance_test_pvalue(double s2, double sigma2, std::size_t n) {
  if (n < 2 || sigma2 <= 0.0) throw ConfigInvalid("variance_test_pvalue: bad inputs");
  const double df = double(n - 1);
  const double x = df * s2 / sigma2;
  // Wilson-Hilferty: (x/df)^{1/3} approx N(1 - 2/(9 df), 2/(9 df))
  const double c = 2.0 / (9.0 * df);
  const double z = (std::cbrt(x / df) - (1.0 - c)) / std::sqrt(c);
  const double tail = z < 0.0 ? normal_cdf(z) : 1.0 - normal_cdf(z);
  return std::clamp(2.0 * tail, 0.0, 1.0);
}

std::vector<bool> holm_bonferroni(const std::vector<double>& pvalues, double alpha) {
  const std::size_t k = pvalues.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::vector<bool> reject(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    const double level = alpha / double(k - i);
    if (pvalues[order[i]] <= level)
      reject[order[i]] = true;
    else
      break;  // once one survives, all larger p-values survive
  }
  return reject;
}

double effective_sample_size(const std::vector<double>& weights) {
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

}  // namespace expphi2
