#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "akt/assignment.hpp"
#include "akt/geometry.hpp"

namespace akt {

// Median bits of a list of even length t = 2s: exactly s ones, and every
// zero-labelled value is <= every one-labelled value. Equal values are
// ordered by index, lower indices receiving zeros first.
std::vector<std::uint8_t> median_bits(std::span<const double> values);

// Hierarchical median-bit labels for n = 4^k points. Bit positions are
// numbered from 1; odd positions split on x, even positions on y, each bit
// being the median bit within the group sharing all earlier bits.
struct BitLabeling {
  std::size_t k = 0;
  // Label of point i as an integer whose most significant of 2k bits is
  // bit position 1.
  std::vector<std::uint64_t> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t bit_count() const { return 2 * k; }
  // Bit at 1-based position pos of point i.
  int bit(std::size_t i, std::size_t pos) const;
  std::vector<std::uint8_t> bits(std::size_t i) const;
  std::string label_string(std::size_t i) const;
};

// k such that n = 4^k, if any.
std::optional<std::size_t> power_of_four_level(std::size_t n);

BitLabeling build_labels(const PointSet& ps, std::size_t k);

struct AjtaiResult {
  Matching matching;  // no duals
  double total_cost = 0.0;
};

// Pairs the unique left and right points carrying each label. Cost is the
// planar squared distance regardless of the sets' metric.
AjtaiResult match_ajtai(const PointSet& left, const PointSet& right, std::size_t k);

// (c, d) / (2^k + 1) where c and d count the ones at odd and even positions.
std::pair<double, double> label_expectation(std::span<const std::uint8_t> bits, std::size_t k);

}  // namespace akt
