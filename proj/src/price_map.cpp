#include "akt/price_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "akt/errors.hpp"
#include "akt/rng.hpp"

namespace akt {

const std::array<Rgb, 256>& price_ramp() {
  static const std::array<Rgb, 256> ramp = [] {
    std::array<Rgb, 256> r{};
    for (int i = 0; i < 256; ++i) {
      const double t = i / 255.0;
      r[i] = {static_cast<std::uint8_t>(std::lround(255 * t)),
              static_cast<std::uint8_t>(std::lround(255 * t)),
              static_cast<std::uint8_t>(std::lround(139 * (1 - t)))};
    }
    return r;
  }();
  return ramp;
}

TorusNearest::TorusNearest(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.empty()) throw InputError("TorusNearest: no points");
  cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(points_.size() / 2.0)));
  grid_.assign(cells_ * cells_, {});
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto cx = std::min(cells_ - 1, static_cast<std::size_t>(points_[i].x * cells_));
    const auto cy = std::min(cells_ - 1, static_cast<std::size_t>(points_[i].y * cells_));
    grid_[cy * cells_ + cx].push_back(i);
  }
}

std::size_t TorusNearest::nearest(const Point2& q) const {
  const long c = static_cast<long>(cells_);
  const long qx = std::min(c - 1, static_cast<long>(q.x * c));
  const long qy = std::min(c - 1, static_cast<long>(q.y * c));
  const double w = 1.0 / static_cast<double>(cells_);
  double best = INFINITY;
  std::size_t best_i = 0;
  auto visit = [&](long cx, long cy) {
    const auto& cell = grid_[((cy % c + c) % c) * c + ((cx % c + c) % c)];
    for (const std::size_t i : cell) {
      const double d = torus_cost(q, points_[i]);
      if (d < best || (d == best && i < best_i)) {
        best = d;
        best_i = i;
      }
    }
  };
  for (long r = 0;; ++r) {
    if (2 * r + 1 >= c) {
      // The ring covers the whole torus: scan every cell exactly once.
      if (r == 0 || 2 * (r - 1) + 1 < c)
        for (long cy = 0; cy < c; ++cy)
          for (long cx = 0; cx < c; ++cx) visit(cx, cy);
      break;
    }
    if (r == 0) {
      visit(qx, qy);
    } else {
      for (long d = -r; d <= r; ++d) {
        visit(qx + d, qy - r);
        visit(qx + d, qy + r);
      }
      for (long d = -r + 1; d <= r - 1; ++d) {
        visit(qx - r, qy + d);
        visit(qx + r, qy + d);
      }
    }
    const double reach = static_cast<double>(r) * w;
    if (best <= reach * reach) break;
  }
  return best_i;
}

namespace {

struct Instance {
  PointSet girls, boys;
  Matching matching;
};

Instance solve_instance(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.girls = sample(SampleKind::UniformSquare, n, rng, Metric::ToroidalSquared);
  inst.boys = sample(SampleKind::UniformSquare, n, rng, Metric::ToroidalSquared);
  inst.matching = solve_exact(inst.girls, inst.boys);
  return inst;
}

PriceMap build_map(const Instance& inst, std::size_t resolution, std::size_t buckets) {
  const std::size_t n = inst.girls.size();
  std::vector<Point2> kids(inst.girls.points().begin(), inst.girls.points().end());
  kids.insert(kids.end(), inst.boys.points().begin(), inst.boys.points().end());
  std::vector<double> price(inst.matching.duals_a);
  price.insert(price.end(), inst.matching.duals_b.begin(), inst.matching.duals_b.end());

  PriceMap map;
  map.n = n;
  map.resolution = resolution;
  map.total_cost = inst.matching.total_cost;
  map.min_value = *std::min_element(price.begin(), price.end());
  map.max_value = *std::max_element(price.begin(), price.end());
  map.values.resize(resolution * resolution);
  map.wife_counts.assign(buckets, 0);
  map.husband_counts.assign(buckets, 0);

  const TorusNearest index(kids);
  for (std::size_t py = 0; py < resolution; ++py)
    for (std::size_t px = 0; px < resolution; ++px) {
      const Point2 center{(px + 0.5) / resolution, (py + 0.5) / resolution};
      const std::size_t kid = index.nearest(center);
      const double v = price[kid];
      map.values[py * resolution + px] = v;
      std::size_t b = map.max_value > 0
                          ? static_cast<std::size_t>(v / map.max_value * static_cast<double>(buckets))
                          : 0;
      b = std::min(b, buckets - 1);
      (kid < n ? map.wife_counts : map.husband_counts)[b]++;
    }
  return map;
}

class Canvas {
 public:
  explicit Canvas(std::size_t res) : res_(res), px_(res * res) {}

  void set(long x, long y, Rgb c) {
    if (x < 0 || y < 0 || x >= static_cast<long>(res_) || y >= static_cast<long>(res_)) return;
    px_[static_cast<std::size_t>(y) * res_ + static_cast<std::size_t>(x)] = c;
  }
  // Image rows run top to bottom; y = 1 is the top edge.
  std::pair<long, long> to_pixel(const Point2& p) const {
    const long x = static_cast<long>(p.x * static_cast<double>(res_));
    const long y = static_cast<long>(res_) - 1 - static_cast<long>(p.y * static_cast<double>(res_));
    return {x, y};
  }
  void line(long x0, long y0, long x1, long y1, Rgb c) {
    const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    for (;;) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const long e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
  void circle(long cx, long cy, long r, Rgb c) {
    for (long y = -r; y <= r; ++y)
      for (long x = -r; x <= r; ++x) {
        const long d = x * x + y * y;
        if (d <= r * r && d >= (r - 1) * (r - 1)) set(cx + x, cy + y, c);
      }
  }
  void square(long cx, long cy, long r, Rgb c) {
    for (long d = -r; d <= r; ++d) {
      set(cx + d, cy - r, c);
      set(cx + d, cy + r, c);
      set(cx - r, cy + d, c);
      set(cx + r, cy + d, c);
    }
  }
  void cross(long cx, long cy, long r, Rgb c) {
    line(cx - r, cy - r, cx + r, cy + r, c);
    line(cx - r, cy + r, cx + r, cy - r, c);
  }
  std::vector<Rgb>& pixels() { return px_; }

 private:
  std::size_t res_;
  std::vector<Rgb> px_;
};

Rgb complement(Rgb c) {
  return {static_cast<std::uint8_t>(255 - c.r), static_cast<std::uint8_t>(255 - c.g),
          static_cast<std::uint8_t>(255 - c.b)};
}

}  // namespace

PriceMap compute_price_map(std::size_t n, std::uint64_t seed, std::size_t resolution,
                           std::size_t buckets) {
  if (n < 2) throw InputError("price map: n must be at least 2");
  if (resolution < 64) throw InputError("price map: resolution must be at least 64");
  if (buckets < 1) throw InputError("price map: need at least one bucket");
  return build_map(solve_instance(n, seed), resolution, buckets);
}

std::vector<std::uint8_t> render_ppm(const PriceMap& map, const PointSet& girls,
                                     const PointSet& boys, const Matching& m) {
  const std::size_t res = map.resolution;
  const auto& ramp = price_ramp();
  auto color_of = [&](double v) {
    const double t = map.max_value > 0 ? v / map.max_value : 0.0;
    return ramp[static_cast<std::size_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255))];
  };
  Canvas canvas(res);
  for (std::size_t py = 0; py < res; ++py)
    for (std::size_t px = 0; px < res; ++px)
      canvas.set(static_cast<long>(px), static_cast<long>(res - 1 - py),
                 color_of(map.values[py * res + px]));

  const long r = std::max<long>(2, static_cast<long>(res / 200));
  const Rgb gray{128, 128, 128};
  for (std::size_t i = 0; i < girls.size(); ++i) {
    const Point2 g = girls[i], b = boys[m.permutation[i]];
    const auto [gx, gy] = canvas.to_pixel(g);
    if (std::fabs(g.x - b.x) <= 0.5 && std::fabs(g.y - b.y) <= 0.5) {
      const auto [bx, by] = canvas.to_pixel(b);
      canvas.line(gx, gy, bx, by, gray);
    } else {
      // The couple meets across the boundary: no segment, wife marked.
      canvas.cross(gx, gy, r + 1, complement(color_of(m.duals_a[i])));
    }
  }
  for (std::size_t i = 0; i < girls.size(); ++i) {
    const auto [x, y] = canvas.to_pixel(girls[i]);
    canvas.circle(x, y, r, complement(color_of(m.duals_a[i])));
  }
  for (std::size_t j = 0; j < boys.size(); ++j) {
    const auto [x, y] = canvas.to_pixel(boys[j]);
    canvas.square(x, y, r, complement(color_of(m.duals_b[j])));
  }

  const std::string header = "P6\n" + std::to_string(res) + " " + std::to_string(res) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + 3 * res * res);
  for (const Rgb& c : canvas.pixels()) {
    bytes.push_back(c.r);
    bytes.push_back(c.g);
    bytes.push_back(c.b);
  }
  return bytes;
}

PriceMapRun render_price_map(std::size_t n, std::uint64_t seed, std::size_t resolution,
                             const std::filesystem::path& image_path, std::size_t buckets) {
  if (n < 2) throw InputError("price map: n must be at least 2");
  if (resolution < 64) throw InputError("price map: resolution must be at least 64");
  if (buckets < 1) throw InputError("price map: need at least one bucket");
  Instance inst = solve_instance(n, seed);
  PriceMapRun run;
  run.map = build_map(inst, resolution, buckets);
  const auto bytes = render_ppm(run.map, inst.girls, inst.boys, inst.matching);
  std::ofstream out(image_path, std::ios::binary);
  if (!out) throw InputError("cannot open " + image_path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  run.girls = std::move(inst.girls);
  run.boys = std::move(inst.boys);
  run.matching = std::move(inst.matching);
  return run;
}

}  // namespace akt
