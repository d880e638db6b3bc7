#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "akt/rng.hpp"

namespace akt {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline double norm2(Point2 a) { return a.x * a.x + a.y * a.y; }

enum class Metric { EuclideanSquared, ToroidalSquared };
enum class SampleKind { UniformSquare, StandardNormalPlane };
enum class QuantileDirection { NormalToUniform, UniformToNormal };

std::string_view to_string(Metric m);
std::string_view to_string(SampleKind k);
Metric parse_metric(std::string_view s);  // "plane" | "torus" (and long names)
SampleKind parse_sample_kind(std::string_view s);  // "uniform" | "normal"

// Ordered points with a distance convention. Index order is the identity
// used by matchings. Toroidal sets must lie in [0,1)^2.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::vector<Point2> points, Metric metric);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Metric metric() const { return metric_; }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point2> points() const { return points_; }

  // Union in order: this set's points followed by other's.
  PointSet concat(const PointSet& other) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point2> points_;
  Metric metric_ = Metric::EuclideanSquared;
};

// n i.i.d. points. Uniform samples carry the requested metric; normal samples
// are always planar.
PointSet sample(SampleKind kind, std::size_t n, Rng& rng,
                Metric metric = Metric::EuclideanSquared);

// Per-axis wrapped displacement on the unit circle, in [0, 0.5].
inline double wrap_delta(double d) {
  d = std::fabs(d);
  return d < 1.0 - d ? d : 1.0 - d;
}

// Unchecked cost kernels for inner loops.
inline double plane_cost(Point2 a, Point2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}
inline double torus_cost(Point2 a, Point2 b) {
  const double dx = wrap_delta(a.x - b.x), dy = wrap_delta(a.y - b.y);
  return dx * dx + dy * dy;
}
inline double cost_unchecked(Point2 a, Point2 b, Metric m) {
  return m == Metric::ToroidalSquared ? torus_cost(a, b) : plane_cost(a, b);
}

// Squared distance under the metric; throws DomainError for toroidal points
// outside [0,1)^2.
double cost(Point2 a, Point2 b, Metric m);

// |(a+b)-(c+d)|^2 minus the six-term pairwise expansion; zero in exact
// arithmetic for any four planar points.
double euclidean_identity_residual(Point2 a, Point2 b, Point2 c, Point2 d);

// Coordinate-wise normal CDF (or its inverse). Strictly monotone per axis.
PointSet marginal_quantile_transform(const PointSet& ps,
                                     QuantileDirection direction,
                                     Metric result_metric = Metric::EuclideanSquared);

bool in_unit_square(Point2 p);

}  // namespace akt
