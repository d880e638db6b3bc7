#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "akt/assignment.hpp"
#include "akt/geometry.hpp"

namespace akt {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 256-entry linear ramp from dark blue (0,0,139) to yellow (255,255,0).
const std::array<Rgb, 256>& price_ramp();

struct PriceMap {
  std::size_t n = 0;
  std::size_t resolution = 0;
  // Row-major, row 0 at y near 0; value of pixel (px, py) is the dual price
  // of the kid nearest to its center.
  std::vector<double> values;
  double min_value = 0.0;
  double max_value = 0.0;
  double total_cost = 0.0;
  // Equal-width buckets over [0, max_value]; counts split by whether the
  // nearest kid is a girl (wife) or a boy (husband).
  std::vector<std::size_t> wife_counts, husband_counts;
};

// Nearest point on the torus among a fixed set, via a uniform cell grid.
class TorusNearest {
 public:
  explicit TorusNearest(std::vector<Point2> points);
  std::size_t nearest(const Point2& q) const;

 private:
  std::vector<Point2> points_;
  std::size_t cells_ = 1;
  std::vector<std::vector<std::size_t>> grid_;
};

// Solves one toroidal instance of size n (girls then boys from the seeded
// stream) and computes the pixel grid. Throws InputError for n < 2 or
// resolution < 64.
PriceMap compute_price_map(std::size_t n, std::uint64_t seed, std::size_t resolution,
                           std::size_t buckets = 16);

// Binary PPM (P6) of the map with kids and couples drawn on top.
std::vector<std::uint8_t> render_ppm(const PriceMap& map, const PointSet& girls,
                                     const PointSet& boys, const Matching& m);

// compute_price_map plus the image file and the instance it was drawn from.
struct PriceMapRun {
  PriceMap map;
  PointSet girls, boys;
  Matching matching;
};
PriceMapRun render_price_map(std::size_t n, std::uint64_t seed, std::size_t resolution,
                             const std::filesystem::path& image_path, std::size_t buckets = 16);

}  // namespace akt
