#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace cje {

/// 64-bit Mersenne Twister keyed by (seed, stream_id).
///
/// Distinct stream ids give independent streams for parallel workers; an
/// identical (seed, stream_id) pair reproduces the same draws on the same
/// build. Satisfies UniformRandomBitGenerator so it plugs into <random>.
class SeededRng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit SeededRng(std::uint64_t seed = 0, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
    engine_.seed(seq);
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform double in the open interval (0, 1), 53 random bits.
  double uniform_open() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Stream id for item `index` of a run keyed by `stream`; splitmix64 mixing so
/// neighbouring indices land on unrelated seed sequences.
inline std::uint64_t derive_stream(std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = stream * 0x9e3779b97f4a7c15ull + index + 0x632be59bd9b4e019ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace cje
