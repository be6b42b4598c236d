#pragma once

#include <cmath>
#include <cstdint>

namespace fmb {

// Counter-based pseudo-random generator.
//
// Each draw hashes (key, counter) through the SplitMix64 finalizer
// (Stafford mix 13), so the sequence depends only on the 64-bit seed and
// the stream id, never on platform or library internals. Streams derived
// via split() are independent for distinct ids, which keeps parallel
// replicates and construction retries reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}

  // Independent generator for a sub-task (replicate index, retry index, ...).
  Rng split(std::uint64_t stream) const {
    Rng r(0);
    r.key_ = mix(key_ ^ mix(stream + 0x9E3779B97F4A7C15ULL));
    r.counter_ = 0;
    r.have_cached_normal_ = false;
    return r;
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do { v = next_u64(); } while (v >= limit);
    return v % n;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Standard normal via the Marsaglia polar method (sqrt and log only, so
  // the stream is identical across libm implementations in practice).
  double normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    have_cached_normal_ = true;
    return u * f;
  }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

}  // namespace fmb
