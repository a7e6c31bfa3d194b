#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace microtrap {

// SplitMix64-based generator. The sampling algorithms in <random> are
// implementation defined, so results would differ between standard
// libraries; this keeps every draw bit-reproducible for a given seed.
// Substreams derived from (seed, site index) make per-site draws
// independent of iteration order.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Box-Muller. Two uniforms consumed per call.
  double gaussian(double mean = 0.0, double sigma = 1.0) {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kBoxMullerTwoPi * u2);
    return mean + sigma * z;
  }

  bool bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
    return uniform() < p;
  }

  // Knuth's product method; fine for the small means used here.
  int poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  int binomial(int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: bad parameters");
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }

  // Derive a decorrelated substream seed, e.g. mix(seed, site_index).
  static uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static uint64_t mix(uint64_t a, uint64_t b, uint64_t c) { return mix(mix(a, b), c); }

 private:
  static constexpr double kBoxMullerTwoPi = 6.28318530717958647692;
  uint64_t state_;
};

}  // namespace microtrap
