#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bayesxg {

/// Deterministic random stream. All draws are derived from raw mt19937_64
/// output through fixed arithmetic, so sequences are identical across
/// platforms and standard-library implementations (the std distribution
/// adaptors make no such promise).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Independent stream for one chain; streams for distinct ids never
  /// collide for a fixed base seed.
  static Rng for_chain(std::uint64_t seed, std::uint64_t chain_id) {
    return Rng(mix(seed) + 0x9E3779B97F4A7C15ULL * (chain_id + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // log(0) guard: shift u1 into (0, 1].
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [lo, hi], inclusive, via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bayesxg
