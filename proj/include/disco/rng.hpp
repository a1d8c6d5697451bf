#pragma once
// Deterministic random streams. Draws are hand-rolled on top of mt19937_64 so
// that (seed -> sequence) does not depend on the standard library's
// distribution implementations.

#include <cmath>
#include <cstdint>
#include <random>

namespace disco {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unit-mean exponential (Rayleigh power fading factor)
  double exponential() { return -std::log1p(-uniform()); }

  // Knuth product method, chunked so large means stay exact in distribution
  std::int64_t poisson(double mean) {
    std::int64_t n = 0;
    while (mean > 50.0) {
      n += poisson_small(50.0);
      mean -= 50.0;
    }
    return n + poisson_small(mean);
  }

  // splitmix64-based stream derivation
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::int64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::int64_t n = -1;
    double prod = 1.0;
    do {
      prod *= uniform();
      ++n;
    } while (prod > limit);
    return n;
  }

  std::mt19937_64 eng_;
};

}  // namespace disco
