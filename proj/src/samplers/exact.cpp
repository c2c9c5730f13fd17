#include "birkhoff/samplers/exact.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "birkhoff/core/error.hpp"
#include "birkhoff/core/random.hpp"

namespace birkhoff {

namespace {

struct ChainOutcome {
  std::vector<SquareMatrix> matrices;
  std::uint64_t proposals = 0;
};

// Proposes free blocks until `want` completions are nonnegative.
ChainOutcome rejection_chain(std::size_t n, std::size_t want, RandomStream& stream,
                             std::uint64_t cap) {
  ChainOutcome out;
  out.matrices.reserve(want);
  if (n == 1) {
    for (std::size_t k = 0; k < want; ++k) out.matrices.emplace_back(1, 1.0);
    out.proposals = want;
    return out;
  }
  const std::size_t free = n - 1;
  std::vector<double> block(free * free);
  std::vector<double> col(free);
  while (out.matrices.size() < want) {
    if (out.proposals >= cap)
      throw ProposalCapError("rejection_exact: proposal cap " + std::to_string(cap) + " reached with " +
                                 std::to_string(out.matrices.size()) + " of " +
                                 std::to_string(want) + " acceptances",
                             cap, out.matrices.size());
    ++out.proposals;
    // All (n-1)^2 uniforms are consumed per proposal so the stream
    // position depends only on the proposal count.
    for (double& v : block) v = stream.uniform();

    bool ok = true;
    double block_total = 0.0;
    std::fill(col.begin(), col.end(), 0.0);
    for (std::size_t i = 0; i < free && ok; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < free; ++j) {
        row += block[i * free + j];
        col[j] += block[i * free + j];
      }
      ok = row <= 1.0;
      block_total += row;
    }
    for (std::size_t j = 0; j < free && ok; ++j) ok = col[j] <= 1.0;
    // Corner: 1 - sum_j (1 - col_j) = block_total - (n - 2).
    ok = ok && block_total >= static_cast<double>(n - 2);
    if (!ok) continue;

    SquareMatrix m(n);
    double corner_from_rows = 1.0;
    for (std::size_t i = 0; i < free; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < free; ++j) {
        m(i, j) = block[i * free + j];
        row += m(i, j);
      }
      m(i, free) = 1.0 - row;
      corner_from_rows -= m(i, free);
    }
    for (std::size_t j = 0; j < free; ++j) m(free, j) = 1.0 - col[j];
    m(free, free) = std::max(0.0, corner_from_rows);
    out.matrices.push_back(std::move(m));
  }
  return out;
}

}  // namespace

RejectionResult rejection_exact(std::size_t n, std::size_t count, std::uint64_t seed,
                                const ChainPlan& plan, const RejectionOptions& options) {
  if (n < 1) throw PreconditionError("rejection_exact: n must be >= 1");
  if (count < 1) throw PreconditionError("rejection_exact: count must be >= 1");
  if (n > 5 && !options.allow_large_n)
    throw PreconditionError("rejection_exact: n = " + std::to_string(n) +
                            " > 5 requires allow_large_n (acceptance decays super-exponentially)");

  const std::size_t chains = std::max<std::size_t>(plan.chains, 1);
  std::vector<ChainOutcome> parts(chains);
  for_each_chain(ChainPlan{chains, plan.workers}, [&](std::size_t c) {
    RandomStream stream(seed, c);
    parts[c] = rejection_chain(n, chain_share(count, chains, c), stream, options.proposal_cap);
  });

  RejectionResult result{SampleBatch(n, Provenance{SamplerId::rejection, seed, 0, 0}), 0, 0};
  result.batch.reserve(count);
  for (auto& part : parts) {
    result.proposals += part.proposals;
    result.accepted += part.matrices.size();
    for (auto& m : part.matrices) result.batch.push_back(std::move(m));
  }
  return result;
}

SampleBatch vertex_mixture(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("vertex_mixture: n must be >= 1");
  if (n > kVertexMixtureMaxN)
    throw PreconditionError("vertex_mixture: n = " + std::to_string(n) + " exceeds the bound n <= " +
                            std::to_string(kVertexMixtureMaxN) + " (n! weights per sample)");

  std::vector<std::vector<std::size_t>> permutations;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    permutations.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  RandomStream stream(seed, 0);
  SampleBatch batch(n, Provenance{SamplerId::vertex_mixture, seed, 0, 0});
  batch.reserve(count);
  std::vector<double> weights(permutations.size());
  for (std::size_t s = 0; s < count; ++s) {
    double total = 0.0;
    for (double& w : weights) {
      w = stream.exponential();
      total += w;
    }
    SquareMatrix m(n);
    for (std::size_t k = 0; k < permutations.size(); ++k) {
      const double w = weights[k] / total;
      for (std::size_t i = 0; i < n; ++i) m(i, permutations[k][i]) += w;
    }
    batch.push_back(std::move(m));
  }
  return batch;
}

}  // namespace birkhoff
