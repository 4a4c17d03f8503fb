#include "polyaprod/rng.hpp"

namespace polyaprod {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RngStream RngStream::split(std::uint64_t stream_id) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(stream_id + 0x1234567890abcdefULL)));
}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::normal() { return normal_(engine_); }

Complex RngStream::complex_normal() {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  const double re = normal_(engine_) * inv_sqrt2;
  const double im = normal_(engine_) * inv_sqrt2;
  return {re, im};
}

std::uint64_t RngStream::next_u64() { return engine_(); }

}  // namespace polyaprod
