#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace akt::stats {

double mean(std::span<const double> x);
// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> x);
// Standardized third central moment (population form).
double skewness(std::span<const double> x);
double correlation(std::span<const double> x, std::span<const double> y);
// Empirical quantile with linear interpolation between order statistics
// (type 7).
double quantile(std::vector<double> x, double p);

// sqrt(N) * sup |F_N(u) - u| for values in [0,1].
double kolmogorov_uniform(std::vector<double> u);

}  // namespace akt::stats
