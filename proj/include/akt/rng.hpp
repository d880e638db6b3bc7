#pragma once

#include <cstdint>
#include <random>

namespace akt {

// Seedable, splittable random stream.
//
// The engine is std::mt19937_64 (bit-exact across standard libraries); all
// conversions to real numbers are done here rather than through <random>
// distributions, whose output is implementation-defined. A stream is named
// by (master seed, path); child(i) derives an independent stream so that
// each replication owns its own generator regardless of scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t master_seed, std::uint64_t stream = 0);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return stream_; }

  // Independent child stream; deterministic in (master, stream, index).
  Rng child(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on the open interval (0, 1).
  double uniform_open();
  // Standard normal via the inverse CDF.
  double normal();
  // Standard exponential, strictly positive.
  double exponential();

 private:
  std::uint64_t master_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace akt
