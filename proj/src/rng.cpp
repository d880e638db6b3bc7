#include "akt/rng.hpp"

#include <cmath>

#include "akt/normal.hpp"

namespace akt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(master);
  const std::uint64_t b = splitmix64(stream ^ 0x5851f42d4c957f2dULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream)
    : master_(master_seed), stream_(stream), engine_(make_engine(master_seed, stream)) {}

Rng Rng::child(std::uint64_t index) const {
  return Rng(master_, splitmix64(stream_ * 0x9e3779b97f4a7c15ULL + index + 1));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal::quantile(uniform_open()); }

double Rng::exponential() { return -std::log(uniform_open()); }

}  // namespace akt
