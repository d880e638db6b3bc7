#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "akt/assignment.hpp"
#include "akt/errors.hpp"
#include "doctest.h"

using namespace akt;

namespace {

PointSet random_set(Rng& r, std::size_t n, Metric m) {
  return sample(SampleKind::UniformSquare, n, r, m);
}

}  // namespace

TEST_SUITE("assignment") {
  TEST_CASE("single point pair") {
    const PointSet l({{0.2, 0.3}}, Metric::EuclideanSquared);
    const PointSet r({{0.5, 0.7}}, Metric::EuclideanSquared);
    const Matching m = solve_exact(l, r);
    CHECK(m.total_cost == doctest::Approx(0.25));
    CHECK(m.permutation == std::vector<std::size_t>{0});
    CHECK(m.optimal);
    CHECK(brute_force(l, r).total_cost == m.total_cost);
  }

  TEST_CASE("identical sets cost nothing") {
    Rng r(4);
    for (const Metric metric : {Metric::EuclideanSquared, Metric::ToroidalSquared}) {
      const PointSet ps = random_set(r, 50, metric);
      CHECK(solve_exact(ps, ps).total_cost == 0.0);
    }
  }

  TEST_CASE("exact solver agrees with enumeration on small instances") {
    Rng r(2718);
    for (const Metric metric : {Metric::EuclideanSquared, Metric::ToroidalSquared}) {
      for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 6);
        const PointSet a = random_set(r, n, metric), b = random_set(r, n, metric);
        const Matching exact = solve_exact(a, b);
        const Matching oracle = brute_force(a, b);
        CHECK(std::fabs(exact.total_cost - oracle.total_cost) <= 1e-12);
      }
    }
  }

  TEST_CASE("brute force finds the swap") {
    const PointSet l({{0, 0}, {1, 1}}, Metric::EuclideanSquared);
    const PointSet r({{1, 1}, {0, 0}}, Metric::EuclideanSquared);
    const Matching m = brute_force(l, r);
    CHECK(m.total_cost == 0.0);
    CHECK(m.permutation == std::vector<std::size_t>{1, 0});
    CHECK_FALSE(m.has_duals());
  }

  TEST_CASE("brute force beats every permutation for n = 3") {
    Rng r(31);
    const PointSet a = random_set(r, 3, Metric::EuclideanSquared);
    const PointSet b = random_set(r, 3, Metric::EuclideanSquared);
    const double best = brute_force(a, b).total_cost;
    std::vector<std::size_t> p = {0, 1, 2};
    int count = 0;
    do {
      CHECK(best <= matching_cost(a, b, p));
      ++count;
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(count == 6);
  }

  TEST_CASE("brute force refuses n > 9") {
    Rng r(1);
    const PointSet a = random_set(r, 10, Metric::EuclideanSquared);
    CHECK_THROWS_AS(brute_force(a, a), RefusalError);
  }

  TEST_CASE("input validation") {
    Rng r(1);
    const PointSet a = random_set(r, 4, Metric::EuclideanSquared);
    const PointSet b = random_set(r, 5, Metric::EuclideanSquared);
    const PointSet c = random_set(r, 4, Metric::ToroidalSquared);
    CHECK_THROWS_AS(solve_exact(a, b), InputError);
    CHECK_THROWS_AS(solve_exact(a, c), InputError);
    CHECK_THROWS_AS(solve_exact(PointSet{}, PointSet{}), InputError);
  }

  TEST_CASE("dual certificates hold on moderate instances") {
    Rng r(77);
    for (const Metric metric : {Metric::EuclideanSquared, Metric::ToroidalSquared}) {
      for (const std::size_t n : {16u, 64u, 256u}) {
        const PointSet a = random_set(r, n, metric), b = random_set(r, n, metric);
        const Matching m = solve_exact(a, b);
        CHECK(is_permutation_of_indices(m.permutation));
        const DualReport rep = verify_duals(a, b, m);
        CHECK(rep.feasible);
        CHECK(rep.max_violation <= 1e-9);
        CHECK(rep.slack_on_matched <= 1e-9);
        const double lo = std::min(*std::min_element(m.duals_a.begin(), m.duals_a.end()),
                                   *std::min_element(m.duals_b.begin(), m.duals_b.end()));
        CHECK(lo == 0.0);
        // Summing the matched equalities recovers the total cost.
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += m.duals_b[m.permutation[i]] - m.duals_a[i];
        CHECK(std::fabs(s - m.total_cost) <= 1e-6 * m.total_cost);
      }
    }
  }

  TEST_CASE("on-demand cost path above the dense limit is still optimal") {
    Rng r(1234);
    const std::size_t n = kDenseCostLimit + 76;
    const PointSet a = random_set(r, n, Metric::ToroidalSquared);
    const PointSet b = random_set(r, n, Metric::ToroidalSquared);
    const Matching m = solve_exact(a, b);
    const DualReport rep = verify_duals(a, b, m);
    CHECK(rep.feasible);
    CHECK(rep.slack_on_matched <= 1e-9);
  }

  TEST_CASE("zero duals are feasible with slack equal to the largest matched cost") {
    const PointSet l({{0, 0}, {1, 0}}, Metric::EuclideanSquared);
    const PointSet r({{0, 1}, {1, 2}}, Metric::EuclideanSquared);
    Matching m;
    m.permutation = {0, 1};
    m.duals_a = {0, 0};
    m.duals_b = {0, 0};
    const DualReport rep = verify_duals(l, r, m);
    CHECK(rep.feasible);
    CHECK(rep.slack_on_matched == doctest::Approx(4.0));
  }

  TEST_CASE("inflated duals are infeasible") {
    Rng r(9);
    const PointSet a = random_set(r, 12, Metric::EuclideanSquared);
    const PointSet b = random_set(r, 12, Metric::EuclideanSquared);
    Matching m = solve_exact(a, b);
    m.duals_b[3] += 1.0;
    const DualReport rep = verify_duals(a, b, m);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.max_violation > 0.5);
  }

  TEST_CASE("verify_duals needs duals") {
    Rng r(9);
    const PointSet a = random_set(r, 5, Metric::EuclideanSquared);
    CHECK_THROWS_AS(verify_duals(a, a, brute_force(a, a)), InputError);
  }

  TEST_CASE("permuting the right points does not change the optimum") {
    Rng r(66);
    const PointSet a = random_set(r, 40, Metric::EuclideanSquared);
    const PointSet b = random_set(r, 40, Metric::EuclideanSquared);
    std::vector<Point2> shuffled(b.points().begin(), b.points().end());
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 7, shuffled.end());
    const double c1 = solve_exact(a, b).total_cost;
    const double c2 = solve_exact(a, PointSet(shuffled, Metric::EuclideanSquared)).total_cost;
    CHECK(std::fabs(c1 - c2) <= 1e-12);
  }

  TEST_CASE("scaling the plane scales the cost quadratically") {
    Rng r(67);
    const PointSet a = random_set(r, 30, Metric::EuclideanSquared);
    const PointSet b = random_set(r, 30, Metric::EuclideanSquared);
    auto scaled = [](const PointSet& ps, double s) {
      std::vector<Point2> out;
      for (const auto& p : ps.points()) out.push_back({s * p.x, s * p.y});
      return PointSet(out, Metric::EuclideanSquared);
    };
    const double c1 = solve_exact(a, b).total_cost;
    const double c3 = solve_exact(scaled(a, 3.0), scaled(b, 3.0)).total_cost;
    CHECK(c3 == doctest::Approx(9.0 * c1).epsilon(1e-9));
  }

  TEST_CASE("two-swap improver") {
    SUBCASE("reaches the optimum from the crossed matching") {
      const PointSet l({{0, 0}, {1, 1}}, Metric::EuclideanSquared);
      const PointSet r({{1, 1}, {0, 0}}, Metric::EuclideanSquared);
      Matching start;
      start.permutation = {0, 1};
      start.total_cost = matching_cost(l, r, start.permutation);
      CHECK(start.total_cost == 4.0);
      const Matching m = improve_two_swap(l, r, start);
      CHECK(m.permutation == std::vector<std::size_t>{1, 0});
      CHECK(m.total_cost == 0.0);
    }
    SUBCASE("leaves an optimal matching unchanged in cost") {
      Rng r(5);
      const PointSet a = random_set(r, 60, Metric::EuclideanSquared);
      const PointSet b = random_set(r, 60, Metric::EuclideanSquared);
      const Matching opt = solve_exact(a, b);
      CHECK(improve_two_swap(a, b, opt).total_cost == doctest::Approx(opt.total_cost).epsilon(1e-14));
    }
    SUBCASE("never increases cost and ends 2-opt") {
      Rng r(6);
      for (int t = 0; t < 20; ++t) {
        const PointSet a = random_set(r, 40, Metric::ToroidalSquared);
        const PointSet b = random_set(r, 40, Metric::ToroidalSquared);
        Matching start;
        start.permutation.resize(40);
        std::iota(start.permutation.begin(), start.permutation.end(), 0);
        start.total_cost = matching_cost(a, b, start.permutation);
        const Matching m = improve_two_swap(a, b, start);
        CHECK(m.total_cost <= start.total_cost);
        CHECK(m.total_cost >= solve_exact(a, b).total_cost - 1e-12);
        for (std::size_t i = 0; i < 40; ++i)
          for (std::size_t k = i + 1; k < 40; ++k) {
            const double now = cost(a[i], b[m.permutation[i]], a.metric()) +
                               cost(a[k], b[m.permutation[k]], a.metric());
            const double swapped = cost(a[i], b[m.permutation[k]], a.metric()) +
                                   cost(a[k], b[m.permutation[i]], a.metric());
            CHECK(swapped >= now - kSwapTolerance);
          }
      }
    }
    SUBCASE("rejects a non-permutation") {
      Rng r(7);
      const PointSet a = random_set(r, 3, Metric::EuclideanSquared);
      Matching bad;
      bad.permutation = {0, 0, 1};
      CHECK_THROWS_AS(improve_two_swap(a, a, bad), InputError);
    }
  }

  TEST_CASE("dense solver matches enumeration") {
    Rng r(101);
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 7);
      std::vector<double> c(n * n);
      for (double& v : c) v = r.uniform() * 10;
      const DenseAssignment d = solve_dense(c, n);
      std::vector<std::size_t> p(n);
      std::iota(p.begin(), p.end(), 0);
      double best = 1e300;
      do {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += c[i * n + p[i]];
        best = std::min(best, s);
      } while (std::next_permutation(p.begin(), p.end()));
      CHECK(d.total_cost == doctest::Approx(best).epsilon(1e-12));
    }
  }
}
