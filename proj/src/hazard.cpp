#include "akt/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "akt/errors.hpp"
#include "akt/normal.hpp"
#include "akt/parallel.hpp"
#include "akt/stats.hpp"

namespace akt::hazard {

void HazardParams::validate() const {
  if (!std::isfinite(mu)) throw DomainError("HazardParams: mu must be finite");
  if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("HazardParams: sigma must be > 0");
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw DomainError("HazardParams: lambda must be > 0");
}

double std_density(double x) {
  return std::exp(normal::log_cdf(x) - normal::integrated_cdf(x));
}

double std_log_density_slope(double x) { return normal::inverse_mills(x) - normal::cdf(x); }

double integrated_hazard(double x, const HazardParams& p) {
  const double y = (x - p.mu) / p.sigma;
  return p.lambda * normal::integrated_cdf(y);
}

double log_tail(double x, const HazardParams& p) { return -integrated_hazard(x, p); }

double tail(double x, const HazardParams& p) { return std::exp(log_tail(x, p)); }

double log_density(double x, const HazardParams& p) {
  const double y = (x - p.mu) / p.sigma;
  return std::log(p.lambda) - std::log(p.sigma) + normal::log_cdf(y) -
         p.lambda * normal::integrated_cdf(y);
}

double density(double x, const HazardParams& p) { return std::exp(log_density(x, p)); }

double hazard_rate(double x, const HazardParams& p) {
  return p.lambda * normal::cdf((x - p.mu) / p.sigma) / p.sigma;
}

double scaled_shape_density(double z, double lambda, double alpha) {
  const double s = std::pow(lambda, alpha);
  return s * density(s * z, HazardParams{0.0, 1.0, lambda});
}

namespace {

// Solves log(y Phi(y) + phi(y)) = log_target by safeguarded Newton.
double standard_root(double log_target) {
  auto f = [&](double y) { return normal::log_integrated_cdf(y) - log_target; };
  // g(y) >= max(y, 0) and g(y) ~ phi(y)/y^2 far left give the starting point.
  double y = log_target > 0 ? std::exp(log_target)
                            : -std::sqrt(std::max(0.0, -2.0 * log_target - 2.0));
  double lo = y, hi = y;
  double flo = f(lo), fhi = flo;
  for (double step = 1.0; flo > 0; step *= 2) {
    hi = lo;
    fhi = flo;
    lo -= step;
    flo = f(lo);
  }
  for (double step = 1.0; fhi < 0; step *= 2) {
    lo = hi;
    flo = fhi;
    hi += step;
    fhi = f(hi);
  }
  if (flo == 0) return lo;
  if (fhi == 0) return hi;

  y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fy = f(y);
    if (fy == 0) return y;
    if (fy < 0)
      lo = y;
    else
      hi = y;
    if (std::fabs(fy) < 1e-15) return y;
    const double slope =
        std::exp(normal::log_cdf(y) - normal::log_integrated_cdf(y));  // d/dy log g
    double next = y - fy / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - y) <= 1e-16 * std::max(1.0, std::fabs(y))) return next;
    y = next;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(y)))
      return y;
  }
  return y;
}

}  // namespace

double quantile_from_exponential(double e, const HazardParams& p) {
  p.validate();
  if (!(e > 0) || !std::isfinite(e))
    throw DomainError("quantile_from_exponential: e must be positive and finite");
  return p.mu + p.sigma * standard_root(std::log(e) - std::log(p.lambda));
}

double sample(const HazardParams& p, Rng& rng) {
  return quantile_from_exponential(rng.exponential(), p);
}

Objective mean_negative_log_likelihood(std::span<const double> data,
                                       const std::array<double, 3>& theta) {
  const double mu = theta[0];
  const double sigma = std::exp(theta[1]);
  const double lambda = std::exp(theta[2]);
  Objective out;
  double value = 0, gmu = 0, gs = 0, gl = 0;
  for (const double x : data) {
    const double y = (x - mu) / sigma;
    const double g = normal::integrated_cdf(y);
    const double cdf = normal::cdf(y);
    const double score = normal::inverse_mills(y) - lambda * cdf;  // d loglik / dy
    value -= theta[2] - theta[1] + normal::log_cdf(y) - lambda * g;
    gmu += score / sigma;
    gs += 1.0 + y * score;
    gl += lambda * g - 1.0;
  }
  const double n = static_cast<double>(data.size());
  out.value = value / n;
  out.gradient = {gmu / n, gs / n, gl / n};
  return out;
}

namespace {

struct Minimum {
  std::array<double, 3> theta{};
  double value = std::numeric_limits<double>::infinity();
  double gradient_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// BFGS on the first `dim` coordinates of theta (the rest stay fixed).
Minimum bfgs(std::span<const double> data, std::array<double, 3> theta, int dim,
             int max_iterations, double gtol) {
  auto eval = [&](const std::array<double, 3>& t) {
    Objective o = mean_negative_log_likelihood(data, t);
    if (!std::isfinite(o.value)) o.value = std::numeric_limits<double>::infinity();
    return o;
  };
  auto gnorm = [&](const Objective& o) {
    double m = 0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::fabs(o.gradient[i]));
    return m;
  };
  double h[3][3] = {};
  auto reset = [&] {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h[i][j] = i == j ? 1.0 : 0.0;
  };
  reset();

  Objective cur = eval(theta);
  Minimum out;
  int iter = 0;
  bool just_reset = true;
  int stalled = 0;
  for (; iter < max_iterations; ++iter) {
    if (gnorm(cur) <= gtol) break;
    std::array<double, 3> dir{};
    double slope = 0;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) dir[i] -= h[i][j] * cur.gradient[j];
      slope += dir[i] * cur.gradient[i];
    }
    if (!(slope < 0)) {
      reset();
      for (int i = 0; i < dim; ++i) dir[i] = -cur.gradient[i];
      slope = 0;
      for (int i = 0; i < dim; ++i) slope += dir[i] * cur.gradient[i];
      just_reset = true;
    }
    double max_step = 0;
    for (int i = 0; i < dim; ++i) max_step = std::max(max_step, std::fabs(dir[i]));
    double alpha = max_step > 1.0 ? 1.0 / max_step : 1.0;

    std::array<double, 3> trial = theta;
    Objective next;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      trial = theta;
      for (int i = 0; i < dim; ++i) trial[i] += alpha * dir[i];
      next = eval(trial);
      if (next.value <= cur.value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (just_reset) break;
      reset();
      just_reset = true;
      continue;
    }
    just_reset = false;

    double s[3] = {}, yv[3] = {};
    double sy = 0;
    for (int i = 0; i < dim; ++i) {
      s[i] = trial[i] - theta[i];
      yv[i] = next.gradient[i] - cur.gradient[i];
      sy += s[i] * yv[i];
    }
    const double decrease = cur.value - next.value;
    theta = trial;
    cur = next;
    // Stop once the objective has flattened to rounding level.
    stalled = decrease <= 1e-15 * std::max(1.0, std::fabs(cur.value)) ? stalled + 1 : 0;
    if (stalled >= 3) {
      ++iter;
      break;
    }
    if (sy > 1e-18) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      double hy[3] = {};
      double yhy = 0;
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) hy[i] += h[i][j] * yv[j];
        yhy += yv[i] * hy[i];
      }
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          h[i][j] += (1 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
    }
  }
  out.theta = theta;
  out.value = cur.value;
  out.gradient_norm = gnorm(cur);
  out.iterations = iter;
  return out;
}

}  // namespace

FitResult fit_mle(std::span<const double> data, const FitOptions& options) {
  if (data.size() < kMinFitObservations)
    throw InputError("fit_mle: need at least 30 observations");
  for (const double x : data)
    if (!std::isfinite(x)) throw InputError("fit_mle: non-finite observation");
  const double center = stats::mean(data);
  const double scale = stats::stddev(data);
  if (!(scale > 0)) throw FitError("fit_mle: degenerate data (zero standard deviation)");
  if (options.fixed_lambda && !(*options.fixed_lambda > 0))
    throw DomainError("fit_mle: fixed lambda must be positive");

  // Fit in standardized units; the family is location-scale so the optimum
  // maps back exactly.
  std::vector<double> z(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) z[i] = (data[i] - center) / scale;

  const int dim = options.fixed_lambda ? 2 : 3;
  const double l0 = options.fixed_lambda ? std::log(*options.fixed_lambda) : 0.0;
  const double s0 = -std::log(kStdSd);
  const double m0 = -kStdMean / kStdSd;
  const double half = 0.5 / kStdSd;
  std::vector<std::array<double, 3>> starts = {{m0, s0, l0},
                                               {m0 - half, s0, l0},
                                               {m0 + half, s0, l0}};
  if (dim == 3) {
    starts.push_back({m0, s0 - 0.35, std::log(0.5)});
    starts.push_back({m0, s0 + 0.35, std::log(2.0)});
  } else {
    starts.push_back({m0, s0 - 0.35, l0});
    starts.push_back({m0, s0 + 0.35, l0});
  }

  Minimum best;
  for (const auto& start : starts) {
    Minimum m = bfgs(z, start, dim, options.max_iterations, options.gradient_tolerance);
    if (m.value < best.value) best = m;
  }
  if (!std::isfinite(best.value)) throw FitError("fit_mle: likelihood is not finite");

  FitResult r;
  r.params.mu = center + scale * best.theta[0];
  r.params.sigma = scale * std::exp(best.theta[1]);
  r.params.lambda = std::exp(best.theta[2]);
  r.iterations = best.iterations;

  const std::array<double, 3> theta = {r.params.mu, std::log(r.params.sigma),
                                       std::log(r.params.lambda)};
  const Objective at = mean_negative_log_likelihood(data, theta);
  r.log_likelihood = -at.value * static_cast<double>(data.size());
  r.gradient_norm = 0;
  for (int i = 0; i < dim; ++i) r.gradient_norm = std::max(r.gradient_norm, std::fabs(at.gradient[i]));
  r.converged = r.gradient_norm <= kConvergedGradient;
  return r;
}

PitResult pit_statistic(std::span<const double> data, const HazardParams& p) {
  if (data.empty()) throw InputError("pit_statistic: empty data");
  PitResult r;
  r.uniforms.reserve(data.size());
  for (const double x : data) r.uniforms.push_back(tail(x, p));
  r.ks = stats::kolmogorov_uniform(r.uniforms);
  return r;
}

Cutpoints calibrate_cutpoints(std::size_t n_obs, std::size_t n_trials, const Rng& rng,
                              unsigned threads) {
  if (n_trials < kMinCalibrationTrials)
    throw InputError("calibrate_cutpoints: need at least 2000 trials");
  if (n_obs < kMinFitObservations) throw InputError("calibrate_cutpoints: n_obs too small");
  const HazardParams truth{0.0, 1.0, 1.0};
  std::vector<std::optional<double>> slots(n_trials);
  parallel_for(n_trials, threads, [&](std::size_t t) {
    Rng stream = rng.child(t);
    std::vector<double> x(n_obs);
    for (double& v : x) v = sample(truth, stream);
    try {
      const FitResult fit = fit_mle(x);
      if (fit.converged) slots[t] = pit_statistic(x, fit.params).ks;
    } catch (const FitError&) {
    }
  });
  Cutpoints c;
  c.trials = n_trials;
  for (const auto& s : slots) {
    if (s)
      c.statistics.push_back(*s);
    else
      ++c.discarded;
  }
  if (c.statistics.empty()) throw FitError("calibrate_cutpoints: every trial failed");
  std::sort(c.statistics.begin(), c.statistics.end());
  c.c05 = stats::quantile(c.statistics, 0.95);
  c.c01 = stats::quantile(c.statistics, 0.99);
  return c;
}

}  // namespace akt::hazard
