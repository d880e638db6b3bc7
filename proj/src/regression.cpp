#include "akt/regression.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "akt/errors.hpp"

namespace akt::stats {

double OlsResult::residual_sd() const {
  return dof > 0 ? std::sqrt(rss / static_cast<double>(dof)) : 0.0;
}

OlsResult ols(std::span<const std::vector<double>> columns, std::span<const double> y,
              bool intercept) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size() + (intercept ? 1 : 0);
  if (p == 0) throw InputError("ols: no regressors");
  for (const auto& c : columns)
    if (c.size() != n) throw InputError("ols: column length differs from response length");
  if (n <= p) throw InputError("ols: need more observations than coefficients");

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd yy(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t col = 0;
    if (intercept) x(i, col++) = 1.0;
    for (const auto& c : columns) x(i, col++) = c[i];
    yy(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) throw InputError("ols: rank-deficient design");
  const Eigen::VectorXd beta = qr.solve(yy);
  const Eigen::VectorXd resid = yy - x * beta;

  OlsResult r;
  r.coefficients.assign(beta.data(), beta.data() + p);
  r.residuals.assign(resid.data(), resid.data() + n);
  r.rss = resid.squaredNorm();
  r.dof = n - p;
  return r;
}

}  // namespace akt::stats
