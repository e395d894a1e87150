#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bayesda {

/// SplitMix64 (Vigna's public-domain mixer). Counter-based in spirit: the
/// whole state is one 64-bit word, so independent streams are derived by
/// hashing (seed, stream id) pairs rather than by jumping a shared state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]: 53 high bits, shifted away from zero so that
  /// log() of the result is always finite.
  double next_unit_positive() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Derives the key of sub-stream `stream` from a user seed. Streams obtained
/// for distinct (seed, stream) pairs are statistically independent, so work
/// can be split across threads without changing any drawn value.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Standard normal deviates via Box-Muller on a SplitMix64 stream.
/// Fully portable: no implementation-defined std::normal_distribution.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : gen_(key) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.next_unit_positive();
    const double u2 = gen_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bayesda
