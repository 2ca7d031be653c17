#include "nodedens/rng.hpp"

#include <cmath>

#include "nodedens/errors.hpp"

namespace nodedens {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

double RngStream::uniform_open0() {
  // 53 random bits mapped to {1, ..., 2^53} * 2^-53.
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform_open0()); }

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw InvalidParameter("Poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    const double u = uniform_open0();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    // cdf reaches 1 up to rounding; the cap guards a u within rounding of 1.
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  std::uint64_t k = 0;
  double t = exponential();
  while (t <= mean) {
    ++k;
    t += exponential();
  }
  return k;
}

}  // namespace nodedens
