#pragma once

#include <cstddef>
#include <cstdint>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/parallel.hpp"

namespace birkhoff {

struct RejectionOptions {
  /// Proposal budget per chain.
  std::uint64_t proposal_cap = 1'000'000'000ULL;
  /// Permit n > 5, where acceptance is vanishingly small.
  bool allow_large_n = false;
};

struct RejectionResult {
  SampleBatch batch;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  /// accepted / proposals: an unbiased estimate of the (n-1)^2-volume of
  /// the free block of the Birkhoff polytope.
  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// Exact uniform sampling: draw the top-left (n-1)x(n-1) block uniformly
/// on the unit cube and keep it iff the forced last row, last column and
/// corner are all nonnegative. Throws ProposalCapError if a chain hits the
/// cap before collecting its share.
RejectionResult rejection_exact(std::size_t n, std::size_t count, std::uint64_t seed,
                                const ChainPlan& plan = {}, const RejectionOptions& options = {});

/// Largest n accepted by vertex_mixture (n! weights per sample).
inline constexpr std::size_t kVertexMixtureMaxN = 8;

/// Convex combination of all n! permutation matrices with weights uniform
/// on the simplex (normalised exponentials).
SampleBatch vertex_mixture(std::size_t n, std::size_t count, std::uint64_t seed);

}  // namespace birkhoff
