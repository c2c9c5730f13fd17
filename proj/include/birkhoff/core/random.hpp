#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace birkhoff {

/// One reproducible random stream, owned by exactly one chain at a time.
///
/// Streams are keyed by (master seed, stream index). The engine is
/// std::mt19937_64 seeded through std::seed_seq, both of which are fully
/// specified by the standard, and variates are derived from raw engine
/// output here rather than through std::*_distribution so that sequences
/// are bit-identical across standard library implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Exp(1) by inversion; never negative, never infinite.
  double exponential() { return -std::log1p(-uniform()); }

  /// Uniform integer in [0, bound), unbiased (Lemire's multiply-shift with
  /// rejection). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// Deterministic child seed for a labelled sub-experiment (splitmix64
/// finaliser of seed + golden-ratio-scaled tag).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline RandomStream seeded_stream(std::uint64_t seed, std::uint64_t stream_index) {
  return RandomStream(seed, stream_index);
}

}  // namespace birkhoff
