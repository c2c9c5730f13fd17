#include "birkhoff/samplers/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/error.hpp"

namespace birkhoff {

namespace {

constexpr double kIntervalSlack = 1e-12;
constexpr double kEmitTolerance = 1e-9;
constexpr double kRepairTarget = 1e-12;

double clamp_rounding(double v) { return (v < 0.0 && v >= -1e-12) ? 0.0 : v; }

// Uniform unordered pair {lo < hi} from [0, n).
std::pair<std::size_t, std::size_t> draw_pair(std::size_t n, RandomStream& stream) {
  auto first = static_cast<std::size_t>(stream.below(n));
  auto second = static_cast<std::size_t>(stream.below(n - 1));
  if (second >= first) ++second;
  return first < second ? std::pair{first, second} : std::pair{second, first};
}

}  // namespace

GibbsConfig GibbsConfig::defaults(std::size_t n) {
  const auto n2 = static_cast<std::uint64_t>(n) * n;
  const auto log_n = static_cast<std::uint64_t>(std::ceil(std::log(static_cast<double>(std::max<std::size_t>(n, 1)))));
  return GibbsConfig{n, 10 * n2 * log_n, std::max<std::uint64_t>(10 * n2, 1), std::max<std::uint64_t>(10 * n2, 1)};
}

void GibbsConfig::validate() const {
  if (n < 1) throw PreconditionError("GibbsConfig: n must be >= 1");
  if (spacing < 1) throw PreconditionError("GibbsConfig: spacing must be >= 1");
  if (repair_period < 1) throw PreconditionError("GibbsConfig: repair_period must be >= 1");
}

FeasibleInterval block_interval(double a, double b, double c, double d) noexcept {
  return {std::max(0.0, a - d), a + std::min(b, c)};
}

BlockMove apply_gibbs_move(SquareMatrix& m, RandomStream& stream) {
  const std::size_t n = m.size();
  const auto [i0, i1] = draw_pair(n, stream);
  const auto [j0, j1] = draw_pair(n, stream);

  const double a = m(i0, j0);
  const double b = m(i0, j1);
  const double c = m(i1, j0);
  const double d = m(i1, j1);
  FeasibleInterval interval = block_interval(a, b, c, d);
  if (interval.length() < -kIntervalSlack)
    throw CorruptedStateError("infeasible block at rows (" + std::to_string(i0) + "," +
                              std::to_string(i1) + ") cols (" + std::to_string(j0) + "," +
                              std::to_string(j1) + "): interval length " +
                              std::to_string(interval.length()));
  interval.hi = std::max(interval.hi, interval.lo);

  // The uniform is drawn even for a zero-length interval so that the
  // stream position depends only on the move count.
  const double u = stream.uniform();
  const double a_new = interval.lo + interval.length() * u;
  const double top = a + b;   // row i0 block sum
  const double left = a + c;  // column j0 block sum
  const double c_new = clamp_rounding(left - a_new);
  m(i0, j0) = a_new;
  m(i0, j1) = clamp_rounding(top - a_new);
  m(i1, j0) = c_new;
  m(i1, j1) = clamp_rounding((c + d) - c_new);
  return BlockMove{i0, i1, j0, j1, a, a_new, interval};
}

GibbsStepResult gibbs_step(const SquareMatrix& m, RandomStream& stream) {
  if (m.size() < 2) throw PreconditionError("gibbs_step: n must be >= 2");
  const auto report = check_doubly_stochastic(m, 1e-8);
  if (!report.ok)
    throw PreconditionError("gibbs_step: input not doubly stochastic (violation " +
                            std::to_string(report.max_violation) + ")");
  GibbsStepResult result{m, {}};
  result.move = apply_gibbs_move(result.matrix, stream);
  return result;
}

GibbsChain::GibbsChain(const GibbsConfig& cfg, RandomStream stream, std::optional<SquareMatrix> initial)
    : cfg_(cfg), stream_(std::move(stream)) {
  cfg_.validate();
  if (initial) {
    if (initial->size() != cfg_.n) throw PreconditionError("GibbsChain: initial state has wrong size");
    if (!check_doubly_stochastic(*initial, 1e-8))
      throw PreconditionError("GibbsChain: initial state not doubly stochastic");
    state_ = std::move(*initial);
  } else {
    state_ = SquareMatrix::barycenter(cfg_.n);
  }
}

void GibbsChain::advance(std::uint64_t count) {
  if (cfg_.n < 2) {
    moves_ += count;
    return;
  }
  for (std::uint64_t k = 0; k < count; ++k) {
    try {
      apply_gibbs_move(state_, stream_);
    } catch (const CorruptedStateError& e) {
      throw CorruptedStateError("move " + std::to_string(moves_) + ": " + e.what());
    }
    ++moves_;
    if (++since_repair_ >= cfg_.repair_period) {
      since_repair_ = 0;
      if (!check_doubly_stochastic(state_, kRepairTarget)) {
        sinkhorn_repair_in_place(state_, kRepairTarget);
        ++repairs_;
      }
    }
  }
}

void GibbsChain::ensure_margins() {
  if (!check_doubly_stochastic(state_, kEmitTolerance)) {
    try {
      sinkhorn_repair_in_place(state_, kRepairTarget);
    } catch (const Error& e) {
      throw CorruptedStateError("move " + std::to_string(moves_) + ": repair failed: " + e.what());
    }
    ++repairs_;
  }
}

SampleBatch gibbs_chain(const GibbsConfig& cfg, std::size_t count, std::uint64_t seed,
                        std::uint64_t stream_index, std::optional<SquareMatrix> initial) {
  if (count < 1) throw PreconditionError("gibbs_chain: count must be >= 1");
  GibbsChain chain(cfg, RandomStream(seed, stream_index), std::move(initial));
  SampleBatch batch(cfg.n, Provenance{SamplerId::gibbs, seed, cfg.burn_in, cfg.spacing});
  batch.reserve(count);
  chain.sample(count, [&](const SquareMatrix& m) { batch.push_back(m); });
  return batch;
}

SampleBatch gibbs_batch(const GibbsConfig& cfg, std::size_t count, std::uint64_t seed,
                        const ChainPlan& plan) {
  if (count < 1) throw PreconditionError("gibbs_batch: count must be >= 1");
  auto states = gibbs_extract(cfg, count, seed, plan, [](const SquareMatrix& m) { return m; });
  SampleBatch batch(cfg.n, Provenance{SamplerId::gibbs, seed, cfg.burn_in, cfg.spacing});
  batch.reserve(count);
  for (auto& m : states) batch.push_back(std::move(m));
  return batch;
}

}  // namespace birkhoff
