#include "aalenfic/rng.hpp"

#include <cmath>

namespace aalenfic::rng {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t mix(uint64_t seed, std::initializer_list<uint64_t> tags) {
  uint64_t h = splitmix64(seed);
  for (uint64_t t : tags) h = splitmix64(h ^ t);
  return h;
}

double Stream::uniform() {
  // 53-bit mantissa centered in its bin: uniform on (0, 1), excludes both ends
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::exponential() { return -std::log(uniform()); }

double Stream::normal() {
  // Marsaglia polar method
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double Stream::gamma(double shape, double rate) {
  // Marsaglia-Tsang squeeze; shapes below 1 are boosted via
  // Gamma(a) = Gamma(a+1) U^{1/a}.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = normal();
    const double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v))
      return boost * d * v / rate;
  }
}

}  // namespace aalenfic::rng
