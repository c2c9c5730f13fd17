#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <vector>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/matrix.hpp"
#include "birkhoff/core/parallel.hpp"
#include "birkhoff/core/random.hpp"

namespace birkhoff {

/// Parameters of the 2x2-block Gibbs chain on the Birkhoff polytope.
struct GibbsConfig {
  std::size_t n = 2;
  std::uint64_t burn_in = 0;
  std::uint64_t spacing = 1;
  /// Moves between scheduled Sinkhorn repairs.
  std::uint64_t repair_period = 1;

  /// burn_in = 10 n^2 ceil(ln n), spacing = 10 n^2, repair_period = 10 n^2.
  static GibbsConfig defaults(std::size_t n);
  /// Throws PreconditionError if n < 1, spacing < 1 or repair_period < 1.
  void validate() const;
};

/// Range of admissible new values for the top-left entry of a 2x2 block
/// (a b; c d) with its row and column sums held fixed.
struct FeasibleInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const noexcept { return hi - lo; }
};

/// [max(0, a - d), a + min(b, c)].
FeasibleInterval block_interval(double a, double b, double c, double d) noexcept;

/// One applied move: rows row_lo < row_hi, columns col_lo < col_hi, and
/// the top-left block entry going from `previous` to `value`.
struct BlockMove {
  std::size_t row_lo = 0;
  std::size_t row_hi = 0;
  std::size_t col_lo = 0;
  std::size_t col_hi = 0;
  double previous = 0.0;
  double value = 0.0;
  FeasibleInterval interval;
};

/// Applies one move in place. Hot path: does not scan the matrix. Throws
/// CorruptedStateError if the block's feasible interval has negative
/// length beyond 1e-12. Requires n >= 2.
BlockMove apply_gibbs_move(SquareMatrix& m, RandomStream& stream);

struct GibbsStepResult {
  SquareMatrix matrix;
  BlockMove move;
};

/// Value-semantic single step with precondition checks (n >= 2, input
/// doubly stochastic at 1e-8).
GibbsStepResult gibbs_step(const SquareMatrix& m, RandomStream& stream);

/// A single sequential chain owning its state and random stream.
class GibbsChain {
 public:
  /// Starts from the barycenter unless an initial state is given.
  GibbsChain(const GibbsConfig& cfg, RandomStream stream,
             std::optional<SquareMatrix> initial = std::nullopt);

  const GibbsConfig& config() const noexcept { return cfg_; }
  const SquareMatrix& state() const noexcept { return state_; }
  std::uint64_t moves() const noexcept { return moves_; }
  std::uint64_t repairs() const noexcept { return repairs_; }

  /// Performs `count` moves (no-ops for n = 1). Errors are rethrown as
  /// CorruptedStateError naming the failing move index.
  void advance(std::uint64_t count);

  /// Runs the burn-in (once per chain), then calls visit(state) after
  /// every `spacing` further moves, `count` times. Each visited state
  /// passes the doubly stochastic check at 1e-9.
  template <class Visit>
  void sample(std::size_t count, Visit&& visit) {
    if (!burned_in_) {
      advance(cfg_.burn_in);
      burned_in_ = true;
    }
    for (std::size_t k = 0; k < count; ++k) {
      advance(cfg_.spacing);
      ensure_margins();
      visit(static_cast<const SquareMatrix&>(state_));
    }
  }

 private:
  void ensure_margins();

  GibbsConfig cfg_;
  RandomStream stream_;
  SquareMatrix state_;
  std::uint64_t moves_ = 0;
  std::uint64_t since_repair_ = 0;
  std::uint64_t repairs_ = 0;
  bool burned_in_ = false;
};

/// `count` states of one chain on stream (seed, stream_index).
SampleBatch gibbs_chain(const GibbsConfig& cfg, std::size_t count, std::uint64_t seed,
                        std::uint64_t stream_index = 0,
                        std::optional<SquareMatrix> initial = std::nullopt);

/// Runs plan.chains independent chains (chain c on stream index c, each
/// with its own burn-in), splits `count` between them and returns
/// extract(state) for every retained state in chain order.
template <class Extract>
auto gibbs_extract(const GibbsConfig& cfg, std::size_t count, std::uint64_t seed,
                   const ChainPlan& plan, Extract extract) {
  using Value = std::decay_t<std::invoke_result_t<Extract&, const SquareMatrix&>>;
  cfg.validate();
  const std::size_t chains = std::max<std::size_t>(plan.chains, 1);
  std::vector<std::vector<Value>> parts(chains);
  for_each_chain(ChainPlan{chains, plan.workers}, [&](std::size_t c) {
    GibbsChain chain(cfg, RandomStream(seed, c));
    const std::size_t share = chain_share(count, chains, c);
    parts[c].reserve(share);
    chain.sample(share, [&](const SquareMatrix& m) { parts[c].push_back(extract(m)); });
  });
  std::vector<Value> out;
  out.reserve(count);
  for (auto& p : parts)
    for (auto& v : p) out.push_back(std::move(v));
  return out;
}

/// Multi-chain batch; identical to gibbs_chain when plan.chains == 1.
SampleBatch gibbs_batch(const GibbsConfig& cfg, std::size_t count, std::uint64_t seed,
                        const ChainPlan& plan);

}  // namespace birkhoff
