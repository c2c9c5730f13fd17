#include "birkhoff/harness/batch_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "birkhoff/core/checks.hpp"

namespace birkhoff::harness {

namespace {

constexpr double kDriftTolerance = 1e-6;

template <class T>
void put(std::vector<unsigned char>& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<unsigned char>(value >> (8 * b)));
}

template <class T>
T get(const unsigned char* p) {
  T v = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(p[b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<unsigned char> encode_batch(const SampleBatch& batch) {
  const auto& prov = batch.provenance();
  const std::size_t n = batch.n();
  std::vector<unsigned char> out;
  out.reserve(kBatchHeaderBytes + batch.size() * n * n * 8);
  out.insert(out.end(), std::begin(kBatchMagic), std::end(kBatchMagic));
  put(out, static_cast<std::uint32_t>(n));
  put(out, static_cast<std::uint64_t>(batch.size()));
  put(out, prov.seed);
  put(out, static_cast<std::uint32_t>(prov.sampler));
  put(out, prov.burn_in);
  put(out, prov.spacing);
  for (const auto& m : batch)
    for (double v : m.entries()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      put(out, bits);
    }
  return out;
}

LoadedBatch decode_batch(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < sizeof kBatchMagic || std::memcmp(bytes.data(), kBatchMagic, sizeof kBatchMagic) != 0)
    throw MagicMismatchError("batch file: magic mismatch (expected \"BDSM1\")");
  if (bytes.size() < kBatchHeaderBytes)
    throw MalformedHeaderError("batch file: header needs " + std::to_string(kBatchHeaderBytes) + " bytes, got " +
                               std::to_string(bytes.size()));
  const unsigned char* p = bytes.data() + sizeof kBatchMagic;
  const auto n = get<std::uint32_t>(p);
  const auto count = get<std::uint64_t>(p + 4);
  const auto seed = get<std::uint64_t>(p + 12);
  const auto sampler = get<std::uint32_t>(p + 20);
  const auto burn_in = get<std::uint64_t>(p + 24);
  const auto spacing = get<std::uint64_t>(p + 32);
  if (n == 0) throw MalformedHeaderError("batch file: n = 0");
  if (!is_known_sampler(sampler))
    throw MalformedHeaderError("batch file: unknown sampler id " + std::to_string(sampler));
  const std::uint64_t per_matrix = std::uint64_t{n} * n * 8;
  if (count > (UINT64_MAX - kBatchHeaderBytes) / per_matrix)
    throw MalformedHeaderError("batch file: count " + std::to_string(count) + " overflows the payload size");
  const std::uint64_t expected = kBatchHeaderBytes + count * per_matrix;
  if (bytes.size() < expected)
    throw TruncatedPayloadError("batch file: truncated payload, expected " + std::to_string(expected) +
                                    " bytes, got " + std::to_string(bytes.size()),
                                expected, bytes.size());
  if (bytes.size() > expected)
    throw MalformedHeaderError("batch file: " + std::to_string(bytes.size() - expected) +
                               " trailing bytes after the declared payload");

  LoadedBatch out{SampleBatch(n, Provenance{static_cast<SamplerId>(sampler), seed, burn_in, spacing}), {}};
  out.batch.reserve(count);
  const unsigned char* data = bytes.data() + kBatchHeaderBytes;
  const bool doubly_stochastic = static_cast<SamplerId>(sampler) != SamplerId::iid_exponential &&
                                 static_cast<SamplerId>(sampler) != SamplerId::dirichlet_rows;
  for (std::uint64_t k = 0; k < count; ++k) {
    SquareMatrix m(n);
    auto entries = m.entries();
    for (std::size_t i = 0; i < entries.size(); ++i, data += 8) {
      const auto bits = get<std::uint64_t>(data);
      std::memcpy(&entries[i], &bits, sizeof bits);
    }
    if (doubly_stochastic) {
      StochasticityReport r;
      try {
        r = check_doubly_stochastic(m, kDriftTolerance);
      } catch (const CorruptedStateError& e) {
        out.warnings.push_back("matrix " + std::to_string(k) + ": " + e.what());
        out.batch.push_back(std::move(m));
        continue;
      }
      if (!r.ok)
        out.warnings.push_back("matrix " + std::to_string(k) + ": margin drift " + std::to_string(r.max_violation) +
                               " exceeds 1e-6");
    }
    out.batch.push_back(std::move(m));
  }
  return out;
}

void persist_batch(const SampleBatch& batch, const std::filesystem::path& path) {
  const auto bytes = encode_batch(batch);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

LoadedBatch load_batch(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_batch(bytes);
}

}  // namespace birkhoff::harness
