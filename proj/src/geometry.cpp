#include "akt/geometry.hpp"

#include <cmath>
#include <string>

#include "akt/errors.hpp"
#include "akt/normal.hpp"

namespace akt {

std::string_view to_string(Metric m) {
  return m == Metric::ToroidalSquared ? "torus" : "plane";
}

std::string_view to_string(SampleKind k) {
  return k == SampleKind::StandardNormalPlane ? "normal" : "uniform";
}

Metric parse_metric(std::string_view s) {
  if (s == "plane" || s == "EuclideanSquared") return Metric::EuclideanSquared;
  if (s == "torus" || s == "ToroidalSquared") return Metric::ToroidalSquared;
  throw InputError("unknown metric '" + std::string(s) + "' (expected plane|torus)");
}

SampleKind parse_sample_kind(std::string_view s) {
  if (s == "uniform" || s == "UniformSquare") return SampleKind::UniformSquare;
  if (s == "normal" || s == "StandardNormalPlane") return SampleKind::StandardNormalPlane;
  throw InputError("unknown sample kind '" + std::string(s) + "' (expected uniform|normal)");
}

bool in_unit_square(Point2 p) { return p.x >= 0 && p.x < 1 && p.y >= 0 && p.y < 1; }

PointSet::PointSet(std::vector<Point2> points, Metric metric)
    : points_(std::move(points)), metric_(metric) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw DomainError("PointSet: non-finite coordinate");
    if (metric_ == Metric::ToroidalSquared && !in_unit_square(p))
      throw DomainError("PointSet: toroidal coordinates must lie in [0,1)");
  }
}

PointSet PointSet::concat(const PointSet& other) const {
  if (other.metric_ != metric_) throw InputError("concat: mixed metrics");
  std::vector<Point2> pts(points_);
  pts.insert(pts.end(), other.points_.begin(), other.points_.end());
  return PointSet(std::move(pts), metric_);
}

PointSet sample(SampleKind kind, std::size_t n, Rng& rng, Metric metric) {
  if (n == 0) throw InputError("sample: n must be positive");
  std::vector<Point2> pts(n);
  if (kind == SampleKind::UniformSquare) {
    for (auto& p : pts) {
      p.x = rng.uniform_open();
      p.y = rng.uniform_open();
    }
    return PointSet(std::move(pts), metric);
  }
  if (metric == Metric::ToroidalSquared)
    throw InputError("sample: normal samples cannot use the toroidal metric");
  for (auto& p : pts) {
    p.x = rng.normal();
    p.y = rng.normal();
  }
  return PointSet(std::move(pts), Metric::EuclideanSquared);
}

double cost(Point2 a, Point2 b, Metric m) {
  if (m == Metric::ToroidalSquared) {
    if (!in_unit_square(a) || !in_unit_square(b))
      throw DomainError("toroidal cost: coordinates must lie in [0,1)");
    return torus_cost(a, b);
  }
  return plane_cost(a, b);
}

double euclidean_identity_residual(Point2 a, Point2 b, Point2 c, Point2 d) {
  // Extended precision keeps the cancellation error near 1e-12 for
  // coordinates of magnitude 1e3.
  using Real = long double;
  auto sq = [](Real dx, Real dy) { return dx * dx + dy * dy; };
  auto dist = [&](Point2 p, Point2 q) { return sq(Real(p.x) - q.x, Real(p.y) - q.y); };
  const Real lhs = sq((Real(a.x) + b.x) - (Real(c.x) + d.x), (Real(a.y) + b.y) - (Real(c.y) + d.y));
  const Real rhs = dist(a, c) + dist(a, d) + dist(b, c) + dist(b, d) - dist(a, b) - dist(c, d);
  return static_cast<double>(lhs - rhs);
}

PointSet marginal_quantile_transform(const PointSet& ps, QuantileDirection direction,
                                     Metric result_metric) {
  std::vector<Point2> out(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Point2 p = ps[i];
    if (direction == QuantileDirection::NormalToUniform) {
      out[i] = {normal::cdf(p.x), normal::cdf(p.y)};
    } else {
      if (!(p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1))
        throw DomainError("UniformToNormal: coordinates must lie in (0,1)");
      out[i] = {normal::quantile(p.x), normal::quantile(p.y)};
    }
  }
  if (direction == QuantileDirection::UniformToNormal) result_metric = Metric::EuclideanSquared;
  return PointSet(std::move(out), result_metric);
}

}  // namespace akt
