#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "akt/geometry.hpp"
#include "akt/hazard.hpp"
#include "akt/rng.hpp"

namespace akt::dyadic {

// Old girls (a), young girls (b), old boys (c), young boys (d) at one level;
// each set holds 2^level points.
struct QuadSets {
  PointSet a, b, c, d;
  std::size_t level = 0;
};

// Levels 0..k_max of the doubling dynamics. Level 0 draws a, b, c, d (one
// point each, in that order); every later level keeps a = a' + b' and
// c = c' + d' from the previous level and draws fresh b then d.
std::vector<QuadSets> evolve(const Rng& rng, std::size_t k_max,
                             Metric metric = Metric::ToroidalSquared);

inline constexpr std::size_t kMaxLevel = 11;

// W1..W6 = (a,c), (a,d), (b,c), (b,d), (a,b), (c,d); merged is the cost of
// a+b against c+d, i.e. W1 of the next level.
struct DyadicRecord {
  std::size_t level = 0;
  std::array<double, 6> w{};
  double merged = 0.0;

  double s1() const { return w[0] + w[1] + w[2] + w[3]; }
  double s2() const { return w[4] + w[5]; }
};

DyadicRecord six_distances(const QuadSets& q);

// Records for levels 0..k_max of one replication. Each merged value reuses
// W1 of the following level, so only the top level solves an extra
// problem (of size 2^(k_max+1)).
std::vector<DyadicRecord> run_chain(const Rng& rng, std::size_t k_max,
                                    Metric metric = Metric::ToroidalSquared);

// merged = a*S1 - b*S2 + V, fitted without intercept.
struct RecursionFit {
  double a = 0.0;
  double b = 0.0;
  double noise_sd = 0.0;
  std::vector<double> residuals;
  std::size_t count = 0;
  // Same regression with an intercept, for diagnostics.
  double intercept_diag = 0.0, a_diag = 0.0, b_diag = 0.0;
  // Restricted model merged = S1/4 + V.
  double restricted_sd = 0.0;
  double restricted_variance = 0.0;

  double stationarity_defect() const;  // |4a - 2b - 1|
};

inline constexpr std::size_t kMinRecursionRecords = 100;

RecursionFit fit_recursion(std::span<const DyadicRecord> records);

// E W_n = beta * log(n + alpha) + gamma.
struct MeanLawFit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double rss = 0.0;
  bool converged = false;

  double operator()(double n) const;
};

MeanLawFit fit_mean_law(std::span<const std::pair<double, double>> points);

// Conditional law location + sum(slopes[s] * W_s) + sigma * X with X from
// the standard Gaussian-hazard member (lambda = 1).
struct ConditionalFit {
  std::vector<double> slopes;
  double location = 0.0;
  double sigma = 0.0;

  double mean_location(std::span<const double> given) const;
};

struct ARModel {
  std::size_t level = 0;
  ConditionalFit marginal;             // W1
  std::array<ConditionalFit, 5> rows;  // W2..W6 given the preceding W's
  // W1 of the next level given this level's W1..W6.
  std::optional<ConditionalFit> cross;

  // gamma(i, 0) is the location of W_i, gamma(i, s) its coefficient on W_s
  // (i = 2..6, s = 0..i-1).
  double gamma(std::size_t i, std::size_t s) const;
  // sigma of W_i for i = 1..6.
  double sigma(std::size_t i) const;
};

inline constexpr std::size_t kMinARRecords = 200;

// All records must share one level. The cross conditional is fitted from
// the merged values when with_cross is set.
ARModel fit_ar_model(std::span<const DyadicRecord> records, bool with_cross = true);

// Sequential draw through levels 0..L-1 (W1 of level 0 from its marginal,
// later W1's from the previous level's cross conditional) followed by the
// top merged value: 6L + 1 entries, level-major. sigma_scale multiplies
// every sigma; at 0 each entry equals its conditional location.
std::vector<double> simulate_ar(std::span<const ARModel> models, Rng& rng,
                                double sigma_scale = 1.0);

// 6L + 1 vector of one replication's data in the layout used by simulate_ar.
std::vector<double> data_vector(std::span<const DyadicRecord> chain);

// Exact assignment cost between two equal-size clouds of vectors under
// squared Euclidean distance.
double model_vs_data_wasserstein(std::span<const std::vector<double>> model,
                                 std::span<const std::vector<double>> data);

}  // namespace akt::dyadic
