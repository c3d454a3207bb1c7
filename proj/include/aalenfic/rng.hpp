#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aalenfic::rng {

uint64_t splitmix64(uint64_t x);

/// Deterministic substream key from (seed, tags...). Used to give every
/// (individual, purpose, replication) its own independent stream, so
/// datasets are stable under changes of n and replication results do not
/// depend on evaluation order.
uint64_t mix(uint64_t seed, std::initializer_list<uint64_t> tags);

/// Seedable generator with hand-rolled transforms. The mt19937_64 engine is
/// fully specified by the standard and the transforms below avoid
/// std::*_distribution, whose output is implementation-defined; streams are
/// therefore reproducible across platforms.
class Stream {
public:
  explicit Stream(uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform();
  /// Unit-rate exponential.
  double exponential();
  /// Standard normal (polar method).
  double normal();
  /// Gamma(shape, rate) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape, double rate);

private:
  std::mt19937_64 engine_;
};

}  // namespace aalenfic::rng
