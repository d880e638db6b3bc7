#include "akt/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "akt/errors.hpp"
#include "akt/lap.hpp"

namespace akt {

bool is_permutation_of_indices(std::span<const std::size_t> p) {
  std::vector<char> seen(p.size(), 0);
  for (const std::size_t j : p) {
    if (j >= p.size() || seen[j]) return false;
    seen[j] = 1;
  }
  return true;
}

void check_compatible(const PointSet& left, const PointSet& right) {
  if (left.empty() || right.empty()) throw InputError("matching: empty point set");
  if (left.size() != right.size())
    throw InputError("matching: size mismatch (" + std::to_string(left.size()) + " vs " +
                     std::to_string(right.size()) + ")");
  if (left.metric() != right.metric()) throw InputError("matching: mixed metrics");
}

double matching_cost(const PointSet& left, const PointSet& right,
                     std::span<const std::size_t> permutation) {
  const Metric m = left.metric();
  double total = 0.0;
  for (std::size_t i = 0; i < permutation.size(); ++i)
    total += cost_unchecked(left[i], right[permutation[i]], m);
  return total;
}

namespace {

template <Metric M>
LapSolution solve_points(const PointSet& left, const PointSet& right) {
  const std::size_t n = left.size();
  const auto lp = left.points();
  const auto rp = right.points();
  auto kernel = [](Point2 a, Point2 b) {
    if constexpr (M == Metric::ToroidalSquared)
      return torus_cost(a, b);
    else
      return plane_cost(a, b);
  };
  if (n <= kDenseCostLimit) {
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = kernel(lp[i], rp[j]);
    return solve_lap(n, [&](std::ptrdiff_t i, std::ptrdiff_t j) { return c[i * n + j]; });
  }
  return solve_lap(n, [&](std::ptrdiff_t i, std::ptrdiff_t j) { return kernel(lp[i], rp[j]); });
}

}  // namespace

Matching solve_exact(const PointSet& left, const PointSet& right) {
  check_compatible(left, right);
  const std::size_t n = left.size();
  LapSolution lap = left.metric() == Metric::ToroidalSquared
                        ? solve_points<Metric::ToroidalSquared>(left, right)
                        : solve_points<Metric::EuclideanSquared>(left, right);

  Matching m;
  m.permutation = std::move(lap.row_to_col);
  m.total_cost = matching_cost(left, right, m.permutation);
  m.optimal = true;
  // b(j) - a(i) <= c(i,j) with a = -u, b = v; then shift so min is zero.
  m.duals_a.resize(n);
  m.duals_b = std::move(lap.v);
  for (std::size_t i = 0; i < n; ++i) m.duals_a[i] = -lap.u[i];
  const double lo = std::min(*std::min_element(m.duals_a.begin(), m.duals_a.end()),
                             *std::min_element(m.duals_b.begin(), m.duals_b.end()));
  for (double& a : m.duals_a) a -= lo;
  for (double& b : m.duals_b) b -= lo;
  return m;
}

Matching brute_force(const PointSet& left, const PointSet& right) {
  check_compatible(left, right);
  const std::size_t n = left.size();
  if (n > kBruteForceLimit)
    throw RefusalError("brute_force: n = " + std::to_string(n) + " exceeds limit of " +
                       std::to_string(kBruteForceLimit));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Matching best;
  best.total_cost = std::numeric_limits<double>::infinity();
  do {
    const double c = matching_cost(left, right, perm);
    if (c < best.total_cost) {
      best.total_cost = c;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.optimal = true;
  return best;
}

Matching improve_two_swap(const PointSet& left, const PointSet& right, const Matching& m) {
  check_compatible(left, right);
  const std::size_t n = left.size();
  if (m.size() != n || !is_permutation_of_indices(m.permutation))
    throw InputError("improve_two_swap: matching is not a permutation of the inputs");
  const Metric metric = left.metric();
  std::vector<std::size_t> perm = m.permutation;
  std::vector<double> own(n);
  for (std::size_t i = 0; i < n; ++i) own[i] = cost_unchecked(left[i], right[perm[i]], metric);

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        const double swapped = cost_unchecked(left[i], right[perm[k]], metric) +
                               cost_unchecked(left[k], right[perm[i]], metric);
        if (swapped < own[i] + own[k] - kSwapTolerance) {
          std::swap(perm[i], perm[k]);
          own[i] = cost_unchecked(left[i], right[perm[i]], metric);
          own[k] = cost_unchecked(left[k], right[perm[k]], metric);
          improved = true;
        }
      }
    }
  }
  Matching out;
  out.permutation = std::move(perm);
  out.total_cost = matching_cost(left, right, out.permutation);
  out.optimal = false;
  return out;
}

DualReport verify_duals(const PointSet& left, const PointSet& right, const Matching& m) {
  check_compatible(left, right);
  const std::size_t n = left.size();
  if (!m.has_duals() || m.duals_a.size() != n || m.duals_b.size() != n)
    throw InputError("verify_duals: matching carries no duals");
  if (m.size() != n || !is_permutation_of_indices(m.permutation))
    throw InputError("verify_duals: matching is not a permutation of the inputs");
  const Metric metric = left.metric();
  DualReport r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double excess = m.duals_b[j] - m.duals_a[i] - cost_unchecked(left[i], right[j], metric);
      r.max_violation = std::max(r.max_violation, excess);
    }
    const std::size_t j = m.permutation[i];
    const double gap = m.duals_b[j] - m.duals_a[i] - cost_unchecked(left[i], right[j], metric);
    r.slack_on_matched = std::max(r.slack_on_matched, std::abs(gap));
  }
  r.feasible = r.max_violation <= kDualTolerance;
  return r;
}

DenseAssignment solve_dense(std::span<const double> costs, std::size_t n) {
  if (n == 0) throw InputError("solve_dense: empty problem");
  if (costs.size() != n * n) throw InputError("solve_dense: cost matrix is not n x n");
  LapSolution lap =
      solve_lap(n, [&](std::ptrdiff_t i, std::ptrdiff_t j) { return costs[i * n + j]; });
  DenseAssignment out;
  out.permutation = std::move(lap.row_to_col);
  for (std::size_t i = 0; i < n; ++i) out.total_cost += costs[i * n + out.permutation[i]];
  return out;
}

}  // namespace akt
