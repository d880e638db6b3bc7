#include "akt/ajtai.hpp"

#include <algorithm>
#include <numeric>

#include "akt/errors.hpp"

namespace akt {

std::vector<std::uint8_t> median_bits(std::span<const double> values) {
  const std::size_t t = values.size();
  if (t < 2 || t % 2 != 0) throw InputError("median_bits: length must be even and >= 2");
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::uint8_t> bits(t, 0);
  for (std::size_t r = t / 2; r < t; ++r) bits[order[r]] = 1;
  return bits;
}

int BitLabeling::bit(std::size_t i, std::size_t pos) const {
  if (pos < 1 || pos > bit_count()) throw InputError("BitLabeling::bit: position out of range");
  return static_cast<int>((labels[i] >> (bit_count() - pos)) & 1u);
}

std::vector<std::uint8_t> BitLabeling::bits(std::size_t i) const {
  std::vector<std::uint8_t> out(bit_count());
  for (std::size_t p = 1; p <= bit_count(); ++p) out[p - 1] = static_cast<std::uint8_t>(bit(i, p));
  return out;
}

std::string BitLabeling::label_string(std::size_t i) const {
  std::string s(bit_count(), '0');
  for (std::size_t p = 1; p <= bit_count(); ++p)
    if (bit(i, p)) s[p - 1] = '1';
  return s;
}

std::optional<std::size_t> power_of_four_level(std::size_t n) {
  std::size_t k = 0;
  std::size_t m = 1;
  while (m < n) {
    m *= 4;
    ++k;
  }
  if (m != n) return std::nullopt;
  return k;
}

BitLabeling build_labels(const PointSet& ps, std::size_t k) {
  const std::size_t n = ps.size();
  if (k > 31) throw InputError("build_labels: k too large");
  if (n != (std::size_t{1} << (2 * k)))
    throw InputError("build_labels: point count " + std::to_string(n) + " is not 4^" +
                     std::to_string(k));
  BitLabeling out;
  out.k = k;
  out.labels.assign(n, 0);

  // order holds point indices; after step b it is split into 2^(b+1)
  // contiguous groups, each sharing its first b+1 bits.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t group = n;
  for (std::size_t b = 0; b < 2 * k; ++b) {
    const bool use_x = b % 2 == 0;
    auto coord = [&](std::size_t i) { return use_x ? ps[i].x : ps[i].y; };
    auto less = [&](std::size_t a, std::size_t c) {
      const double va = coord(a), vc = coord(c);
      return va < vc || (va == vc && a < c);
    };
    for (std::size_t start = 0; start < n; start += group) {
      auto first = order.begin() + static_cast<std::ptrdiff_t>(start);
      auto mid = first + static_cast<std::ptrdiff_t>(group / 2);
      auto last = first + static_cast<std::ptrdiff_t>(group);
      std::nth_element(first, mid, last, less);
      for (auto it = first; it != last; ++it)
        out.labels[*it] = (out.labels[*it] << 1) | (it >= mid ? 1u : 0u);
    }
    group /= 2;
  }
  return out;
}

AjtaiResult match_ajtai(const PointSet& left, const PointSet& right, std::size_t k) {
  if (left.size() != right.size()) throw InputError("match_ajtai: size mismatch");
  const BitLabeling la = build_labels(left, k);
  const BitLabeling lb = build_labels(right, k);
  const std::size_t n = left.size();
  std::vector<std::size_t> by_label(n);
  for (std::size_t j = 0; j < n; ++j) by_label[lb.labels[j]] = j;

  AjtaiResult r;
  r.matching.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = by_label[la.labels[i]];
    r.matching.permutation[i] = j;
    r.total_cost += plane_cost(left[i], right[j]);
  }
  r.matching.total_cost = r.total_cost;
  r.matching.optimal = false;
  return r;
}

std::pair<double, double> label_expectation(std::span<const std::uint8_t> bits, std::size_t k) {
  if (bits.size() != 2 * k) throw InputError("label_expectation: expected 2k bits");
  double c = 0, d = 0;
  for (std::size_t i = 0; i < k; ++i) {
    c += bits[2 * i];
    d += bits[2 * i + 1];
  }
  const double denom = static_cast<double>(std::size_t{1} << k) + 1.0;
  return {c / denom, d / denom};
}

}  // namespace akt
