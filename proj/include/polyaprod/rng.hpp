#pragma once

#include <cstdint>
#include <random>

#include "polyaprod/types.hpp"

namespace polyaprod {

/// Seeded random stream. Streams are split off a root seed with SplitMix64
/// mixing so parallel tasks get independent, reproducible sub-streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Child stream derived from (root seed, stream_id); independent of how
  /// much the parent has been consumed.
  RngStream split(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }

  double uniform();                  // U(0,1)
  double normal();                   // N(0,1)
  Complex complex_normal();          // CN(0,1): Re, Im ~ N(0,1/2)
  std::uint64_t next_u64();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace polyaprod
