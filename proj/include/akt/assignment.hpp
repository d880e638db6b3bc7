#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "akt/geometry.hpp"

namespace akt {

// A pairing of left point i with right point permutation[i].
//
// When `optimal` is set and duals are present they certify optimality:
// b[j] - a[i] <= c(i,j) for every pair, with equality on matched pairs. Duals
// are shifted so the smallest of all 2n values is zero.
struct Matching {
  std::vector<std::size_t> permutation;
  double total_cost = 0.0;
  std::vector<double> duals_a;
  std::vector<double> duals_b;
  bool optimal = false;

  std::size_t size() const { return permutation.size(); }
  bool has_duals() const { return !duals_a.empty(); }
};

struct DualReport {
  bool feasible = false;
  double max_violation = 0.0;     // max over all (i,j) of max(0, b_j - a_i - c_ij)
  double slack_on_matched = 0.0;  // max over i of |b_pi(i) - a_i - c_i,pi(i)|
};

inline constexpr double kDualTolerance = 1e-9;
inline constexpr double kSwapTolerance = 1e-12;
// Above this size the cost matrix is evaluated on demand instead of stored.
inline constexpr std::size_t kDenseCostLimit = 1024;
inline constexpr std::size_t kBruteForceLimit = 9;

// Sum of matched costs in left-index order.
double matching_cost(const PointSet& left, const PointSet& right,
                     std::span<const std::size_t> permutation);

// Checks sizes and metrics agree; throws InputError otherwise.
void check_compatible(const PointSet& left, const PointSet& right);

// Exact minimum-cost perfect matching with dual prices.
Matching solve_exact(const PointSet& left, const PointSet& right);

// Exhaustive search over all n! permutations (n <= 9). No duals.
Matching brute_force(const PointSet& left, const PointSet& right);

// Two-couple exchange local search: swaps partners of (i, i') whenever that
// lowers the cost by more than kSwapTolerance, until a full scan finds none.
Matching improve_two_swap(const PointSet& left, const PointSet& right, const Matching& m);

DualReport verify_duals(const PointSet& left, const PointSet& right, const Matching& m);

// Exact assignment for an arbitrary dense n x n row-major cost matrix.
// Returns the optimal row->column permutation and its cost.
struct DenseAssignment {
  std::vector<std::size_t> permutation;
  double total_cost = 0.0;
};
DenseAssignment solve_dense(std::span<const double> costs, std::size_t n);

bool is_permutation_of_indices(std::span<const std::size_t> p);

}  // namespace akt
