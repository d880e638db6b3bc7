#include "akt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "akt/errors.hpp"

namespace akt::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw InputError("mean: empty sample");
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) throw InputError("stddev: need at least two values");
  const double m = mean(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double skewness(std::span<const double> x) {
  if (x.size() < 3) throw InputError("skewness: need at least three values");
  const double m = mean(x);
  double m2 = 0, m3 = 0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("correlation: bad sizes");
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw InputError("quantile: empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double kolmogorov_uniform(std::vector<double> u) {
  if (u.empty()) throw InputError("kolmogorov_uniform: empty sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double hi = static_cast<double>(i + 1) / n - u[i];
    const double lo = u[i] - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return std::sqrt(n) * d;
}

}  // namespace akt::stats
