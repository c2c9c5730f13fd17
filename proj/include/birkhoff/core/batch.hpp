#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "birkhoff/core/matrix.hpp"

namespace birkhoff {

/// Sampler registry; numeric values are part of the batch file format.
enum class SamplerId : std::uint32_t {
  gibbs = 1,
  rejection = 2,
  vertex_mixture = 3,
  iid_exponential = 4,
  dirichlet_rows = 5,
};

std::string_view to_string(SamplerId id);
/// Throws PreconditionError for an unknown name.
SamplerId sampler_from_string(std::string_view name);
bool is_known_sampler(std::uint32_t raw);

struct Provenance {
  SamplerId sampler = SamplerId::gibbs;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t spacing = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Ordered collection of same-sized matrices plus how they were produced.
class SampleBatch {
 public:
  SampleBatch(std::size_t n, Provenance provenance) : n_(n), provenance_(provenance) {}

  std::size_t n() const noexcept { return n_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  bool empty() const noexcept { return matrices_.empty(); }

  const SquareMatrix& operator[](std::size_t k) const { return matrices_[k]; }
  const std::vector<SquareMatrix>& matrices() const noexcept { return matrices_; }
  auto begin() const noexcept { return matrices_.begin(); }
  auto end() const noexcept { return matrices_.end(); }

  /// Throws PreconditionError when the side length differs from n().
  void push_back(SquareMatrix m);
  /// Appends another batch's matrices (chain merge); sizes must agree.
  void append(const SampleBatch& other);
  void reserve(std::size_t count) { matrices_.reserve(count); }

  friend bool operator==(const SampleBatch&, const SampleBatch&) = default;

 private:
  std::size_t n_;
  Provenance provenance_;
  std::vector<SquareMatrix> matrices_;
};

}  // namespace birkhoff
