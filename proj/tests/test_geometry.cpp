#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "akt/errors.hpp"
#include "akt/geometry.hpp"
#include "doctest.h"

using namespace akt;

namespace {

std::vector<std::size_t> rank_by_x(const PointSet& ps) {
  std::vector<std::size_t> idx(ps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return ps[a].x < ps[b].x; });
  return idx;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("sampling is deterministic given the stream") {
    Rng a(11), b(11);
    CHECK(sample(SampleKind::UniformSquare, 4, a) == sample(SampleKind::UniformSquare, 4, b));
  }

  TEST_CASE("sampling rejects n = 0") {
    Rng r(1);
    CHECK_THROWS_AS(sample(SampleKind::UniformSquare, 0, r), InputError);
  }

  TEST_CASE("uniform sample mean is within the CLT band") {
    // 3 sigma / sqrt(n) with sigma^2 = 1/12, n = 1e4: 0.00866 < 0.015.
    Rng r(2024);
    const PointSet ps = sample(SampleKind::UniformSquare, 10000, r);
    double s = 0;
    for (const auto& p : ps.points()) {
      CHECK(p.x >= 0.0);
      CHECK(p.x < 1.0);
      s += p.x;
    }
    CHECK(std::fabs(s / 1e4 - 0.5) < 0.015);
  }

  TEST_CASE("normal sample variance is within the CLT band") {
    Rng r(99);
    const PointSet ps = sample(SampleKind::StandardNormalPlane, 10000, r);
    double s = 0, ss = 0;
    for (const auto& p : ps.points()) {
      s += p.x;
      ss += p.x * p.x;
    }
    const double var = (ss - s * s / 1e4) / (1e4 - 1);
    CHECK(std::fabs(var - 1.0) < 0.05);
  }

  TEST_CASE("cost examples") {
    CHECK(cost({0.2, 0.3}, {0.5, 0.7}, Metric::EuclideanSquared) == doctest::Approx(0.25));
    CHECK(cost({0.1, 0.1}, {0.9, 0.9}, Metric::ToroidalSquared) == doctest::Approx(0.08));
    CHECK(cost({0.3, 0.3}, {0.3, 0.3}, Metric::EuclideanSquared) == 0.0);
    CHECK(cost({0.3, 0.3}, {0.3, 0.3}, Metric::ToroidalSquared) == 0.0);
  }

  TEST_CASE("toroidal cost rejects points outside the unit square") {
    CHECK_THROWS_AS(cost({1.0, 0.2}, {0.1, 0.1}, Metric::ToroidalSquared), DomainError);
    CHECK_THROWS_AS(cost({-0.1, 0.2}, {0.1, 0.1}, Metric::ToroidalSquared), DomainError);
    CHECK_THROWS_AS(PointSet({{1.5, 0.0}}, Metric::ToroidalSquared), DomainError);
  }

  TEST_CASE("cost is symmetric and torus never exceeds plane") {
    Rng r(5);
    for (int i = 0; i < 5000; ++i) {
      const Point2 a{r.uniform(), r.uniform()}, b{r.uniform(), r.uniform()};
      const double plane = cost(a, b, Metric::EuclideanSquared);
      const double torus = cost(a, b, Metric::ToroidalSquared);
      CHECK(plane == cost(b, a, Metric::EuclideanSquared));
      CHECK(torus == cost(b, a, Metric::ToroidalSquared));
      CHECK(torus <= plane);
      CHECK(torus <= 0.5);
      if (std::fabs(a.x - b.x) <= 0.5 && std::fabs(a.y - b.y) <= 0.5) CHECK(torus == plane);
    }
  }

  TEST_CASE("euclidean identity residual on random unit-square quadruples") {
    Rng r(16);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      auto pt = [&] { return Point2{r.uniform(), r.uniform()}; };
      worst = std::max(worst, std::fabs(euclidean_identity_residual(pt(), pt(), pt(), pt())));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("euclidean identity residual examples") {
    CHECK(euclidean_identity_residual({0, 0}, {1, 0}, {0, 1}, {1, 1}) == 0.0);
    CHECK(euclidean_identity_residual({0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}) == 0.0);
  }

  TEST_CASE("euclidean identity residual stays tiny for large coordinates") {
    Rng r(17);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      auto pt = [&] { return Point2{2000 * r.uniform() - 1000, 2000 * r.uniform() - 1000}; };
      worst = std::max(worst, std::fabs(euclidean_identity_residual(pt(), pt(), pt(), pt())));
    }
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("marginal quantile transform examples") {
    const PointSet origin({{0.0, 0.0}}, Metric::EuclideanSquared);
    const PointSet u = marginal_quantile_transform(origin, QuantileDirection::NormalToUniform);
    CHECK(u[0].x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u[0].y == doctest::Approx(0.5).epsilon(1e-15));

    Rng r(3);
    const PointSet uni = sample(SampleKind::UniformSquare, 500, r);
    const PointSet back = marginal_quantile_transform(
        marginal_quantile_transform(uni, QuantileDirection::UniformToNormal),
        QuantileDirection::NormalToUniform);
    for (std::size_t i = 0; i < uni.size(); ++i) {
      CHECK(std::fabs(back[i].x - uni[i].x) < 1e-10);
      CHECK(std::fabs(back[i].y - uni[i].y) < 1e-10);
    }
  }

  TEST_CASE("UniformToNormal rejects 0 and 1") {
    CHECK_THROWS_AS(marginal_quantile_transform(PointSet({{0.0, 0.5}}, Metric::EuclideanSquared),
                                                QuantileDirection::UniformToNormal),
                    DomainError);
    CHECK_THROWS_AS(marginal_quantile_transform(PointSet({{0.5, 1.0}}, Metric::EuclideanSquared),
                                                QuantileDirection::UniformToNormal),
                    DomainError);
  }

  TEST_CASE("normal sample is the quantile transform of the uniform sample on the same stream") {
    Rng a(8), b(8);
    const PointSet n = sample(SampleKind::StandardNormalPlane, 64, a);
    const PointSet u = sample(SampleKind::UniformSquare, 64, b);
    CHECK(n == marginal_quantile_transform(u, QuantileDirection::UniformToNormal));
  }

  TEST_CASE("quantile transform preserves x ranks") {
    Rng r(12);
    const PointSet nrm = sample(SampleKind::StandardNormalPlane, 1000, r);
    const PointSet uni = marginal_quantile_transform(nrm, QuantileDirection::NormalToUniform);
    CHECK(rank_by_x(nrm) == rank_by_x(uni));
  }
}
