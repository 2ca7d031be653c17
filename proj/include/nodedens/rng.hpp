#pragma once

#include <cstdint>
#include <random>

namespace nodedens {

/// Deterministic random stream addressed by (seed, stream index).
///
/// Each stream owns its own engine, so trials holding different stream
/// indices can run in any order or concurrently and still reproduce the same
/// draws. Variates are produced from raw engine bits rather than
/// std::*_distribution so that output is identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform on (0, 1]; never returns 0.
  double uniform_open0();

  /// Unit-rate exponential, -ln U with U on (0, 1].
  double exponential();

  /// Poisson(mean). Inversion below mean 30, otherwise counts unit-rate
  /// exponential arrivals in [0, mean]. Both routes are exact.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Stream index for trial `trial` of sweep point `point`.
constexpr std::uint64_t trial_stream(std::uint64_t point, std::uint64_t trial) {
  return (point << 32) | (trial & 0xffffffffULL);
}

}  // namespace nodedens
