#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace akt::stats {

struct OlsResult {
  // Intercept first when fitted, then one slope per regressor column.
  std::vector<double> coefficients;
  std::vector<double> residuals;
  double rss = 0.0;
  std::size_t dof = 0;  // observations minus fitted coefficients
  // sqrt(rss / dof).
  double residual_sd() const;
};

// Least squares of y on the given regressor columns. Throws InputError on
// shape problems or a rank-deficient design.
OlsResult ols(std::span<const std::vector<double>> columns, std::span<const double> y,
              bool intercept);

}  // namespace akt::stats
