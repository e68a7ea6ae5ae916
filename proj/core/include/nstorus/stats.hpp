// Small statistical helpers shared by the sampling diagnostics: exact
// binomial confidence intervals, percentile bootstrap, and log-log slope
// fits.

#pragma once

#include <vector>

namespace nstorus {

struct BinomialCi {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
BinomialCi clopper_pearson(long long hits, long long n, double confidence = 0.95);

// p-quantile of a sample (linear interpolation between order statistics).
double percentile(std::vector<double> values, double p);

// Least-squares slope of log(y) against log(x), restricted to pairs with
// y > 0. Returns the number of points used through `points_used`.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y,
                     int* points_used = nullptr);

// Spearman rank correlation (average ranks on ties).
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nstorus
