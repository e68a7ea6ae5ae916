#include "nstorus/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <numeric>

#include "nstorus/errors.hpp"

namespace nstorus {

BinomialCi clopper_pearson(long long hits, long long n, double confidence) {
  if (n <= 0 || hits < 0 || hits > n) throw ConfigError("invalid binomial counts");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("invalid confidence level");
  const double alpha = 1.0 - confidence;
  BinomialCi ci;
  if (hits == 0) {
    ci.lo = 0.0;
  } else {
    boost::math::beta_distribution<double> lo(static_cast<double>(hits),
                                              static_cast<double>(n - hits + 1));
    ci.lo = boost::math::quantile(lo, alpha / 2.0);
  }
  if (hits == n) {
    ci.hi = 1.0;
  } else {
    boost::math::beta_distribution<double> hi(static_cast<double>(hits + 1),
                                              static_cast<double>(n - hits));
    ci.hi = boost::math::quantile(hi, 1.0 - alpha / 2.0);
  }
  return ci;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ConfigError("percentile of empty sample");
  p = std::clamp(p, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * values[lo] + w * values[hi];
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y,
                     int* points_used) {
  if (x.size() != y.size()) throw ConfigError("slope fit needs matching arrays");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (points_used) *points_used = n;
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

namespace {
std::vector<double> ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("spearman needs paired samples");
  const auto rx = ranks(x), ry = ranks(y);
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0, dx = 0, dy = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace nstorus
