#include "birkhoff/core/random.hpp"

namespace birkhoff {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_index) {
  // The trailing constant separates these streams from any other user of
  // the same (seed, index) pair fed through seed_seq.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x42444d31u};
  return std::mt19937_64(seq);
}

__extension__ typedef unsigned __int128 u128;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  u128 product = static_cast<u128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<u128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace birkhoff
