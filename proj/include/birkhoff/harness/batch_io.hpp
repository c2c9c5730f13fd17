#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/error.hpp"

namespace birkhoff::harness {

/// File layout: magic "BDSM1", then little-endian u32 n, u64 count, u64 seed,
/// u32 sampler_id, u64 burn_in, u64 spacing, then count*n*n f64 values,
/// row-major within a matrix, matrices in order.
inline constexpr char kBatchMagic[5] = {'B', 'D', 'S', 'M', '1'};
inline constexpr std::size_t kBatchHeaderBytes = 5 + 4 + 8 + 8 + 4 + 8 + 8;

class BatchFormatError : public Error {
 public:
  using Error::Error;
};

class MagicMismatchError : public BatchFormatError {
 public:
  using BatchFormatError::BatchFormatError;
};

class MalformedHeaderError : public BatchFormatError {
 public:
  using BatchFormatError::BatchFormatError;
};

class TruncatedPayloadError : public BatchFormatError {
 public:
  TruncatedPayloadError(const std::string& what, std::uint64_t expected, std::uint64_t actual)
      : BatchFormatError(what), expected_bytes(expected), actual_bytes(actual) {}
  std::uint64_t expected_bytes;
  std::uint64_t actual_bytes;
};

struct LoadedBatch {
  SampleBatch batch;
  /// One entry per matrix whose margins drift beyond 1e-6.
  std::vector<std::string> warnings;
};

void persist_batch(const SampleBatch& batch, const std::filesystem::path& path);
LoadedBatch load_batch(const std::filesystem::path& path);

/// In-memory forms of the same format.
std::vector<unsigned char> encode_batch(const SampleBatch& batch);
LoadedBatch decode_batch(const std::vector<unsigned char>& bytes);

}  // namespace birkhoff::harness
