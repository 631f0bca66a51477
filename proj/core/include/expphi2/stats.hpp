#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "expphi2/rng.hpp"

namespace expphi2 {

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
  std::size_t n = 0;
};

Summary summarize(const std::vector<double>& x);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // residual-based OLS standard error
};

/// Ordinary least squares y ~ a + b x. Throws DegenerateRegression for fewer
/// than 3 points or zero x-variance.
LineFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

struct BootstrapSlope {
  double slope = 0.0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;  // 2.5th percentile
  double ci_hi = 0.0;  // 97.5th percentile
};

/// Nonparametric bootstrap of a slope statistic: resamples replicate indices,
/// recomputes the statistic, reports sd and the 95% percentile interval.
/// `stat` maps a list of replicate indices to a slope value.
BootstrapSlope bootstrap_slope(std::size_t n_replicates,
                               const std::function<double(const std::vector<std::size_t>&)>& stat,
                               RngStream& rng, int n_boot = 400);

double normal_cdf(double z);
double normal_quantile(double p);

/// Two-sided p-value of the two-sample Kolmogorov-Smirnov statistic
/// (asymptotic Kolmogorov distribution with the standard finite-size tweak).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/// p-value that a sample variance s2 (dof = n-1) came from sigma2, two-sided,
/// Wilson-Hilferty chi-square approximation.
double variance_test_pvalue(double s2, double sigma2, std::size_t n);

/// Holm-Bonferroni: true entries = rejected at family-wise level alpha.
std::vector<bool> holm_bonferroni(const std::vector<double>& pvalues, double alpha);

/// (sum w)^2 / sum w^2 — effective sample size of importance weights.
double effective_sample_size(const std::vector<double>& weights);

}  // namespace expphi2
