#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "akt/rng.hpp"

namespace akt::hazard {

// Location-scale-shape family whose hazard rate is lambda/sigma * Phi(y),
// y = (x - mu)/sigma. Its integrated hazard is lambda*(y Phi(y) + phi(y)).
struct HazardParams {
  double mu = 0.0;
  double sigma = 1.0;
  double lambda = 1.0;

  void validate() const;  // throws DomainError unless sigma > 0, lambda > 0
};

// Mean and standard deviation of the standard member (0, 1, 1), obtained by
// adaptive quadrature of x f(x) and (x - m)^2 f(x) over [-20, 60].
inline constexpr double kStdMean = 0.6336512566007199;
inline constexpr double kStdSd = 1.318722871551273;

// Phi(x) exp(-(x Phi(x) + phi(x))).
double std_density(double x);
// d/dx log std_density(x) = phi(x)/Phi(x) - Phi(x).
double std_log_density_slope(double x);

double integrated_hazard(double x, const HazardParams& p);
double log_tail(double x, const HazardParams& p);  // exactly -integrated_hazard
double tail(double x, const HazardParams& p);
double log_density(double x, const HazardParams& p);
double density(double x, const HazardParams& p);
double hazard_rate(double x, const HazardParams& p);

// Density of X_lambda / lambda^alpha, where X_lambda has parameters
// (0, 1, lambda).
double scaled_shape_density(double z, double lambda, double alpha);

// Solves integrated_hazard(y, p) = e. Feeding standard exponentials yields
// draws from p. e must be positive.
double quantile_from_exponential(double e, const HazardParams& p);

double sample(const HazardParams& p, Rng& rng);

// Mean negative log-likelihood over theta = (mu, log sigma, log lambda) and
// its gradient; the free-lambda layout is used even when lambda is fixed.
struct Objective {
  double value = 0.0;
  std::array<double, 3> gradient{};
};
Objective mean_negative_log_likelihood(std::span<const double> data,
                                       const std::array<double, 3>& theta);

struct FitOptions {
  std::optional<double> fixed_lambda;  // profile fit with lambda held here
  int max_iterations = 500;
  double gradient_tolerance = 1e-9;
};

struct FitResult {
  HazardParams params;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;  // max-norm of the per-observation gradient
};

inline constexpr std::size_t kMinFitObservations = 30;
inline constexpr double kConvergedGradient = 1e-6;

// Maximum likelihood over (mu, log sigma, log lambda) by BFGS, started from
// the moment-matching point and four perturbations; the best is returned.
FitResult fit_mle(std::span<const double> data, const FitOptions& options = {});

struct PitResult {
  double ks = 0.0;
  std::vector<double> uniforms;
};

// uniforms = tail(x_i, p); ks = sqrt(N) sup |F_N - U|.
PitResult pit_statistic(std::span<const double> data, const HazardParams& p);

struct Cutpoints {
  double c05 = 0.0;
  double c01 = 0.0;
  std::size_t trials = 0;
  std::size_t discarded = 0;
  std::vector<double> statistics;  // sorted ks values of kept trials
};

inline constexpr std::size_t kMinCalibrationTrials = 2000;

// Null distribution of the PIT Kolmogorov statistic when parameters are
// estimated: each trial draws n_obs values from (0,1,1), refits, and
// evaluates ks at the fitted parameters. Trial t uses rng.child(t).
Cutpoints calibrate_cutpoints(std::size_t n_obs, std::size_t n_trials, const Rng& rng,
                              unsigned threads = 1);

}  // namespace akt::hazard
