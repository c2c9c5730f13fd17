#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "birkhoff/core/matrix.hpp"

namespace birkhoff {

/// Mixing threshold on the worst-row TV distance.
inline constexpr double kMixingThreshold = 0.25;

struct MixingReport {
  std::size_t n = 0;
  /// d[t-1] = max_i 1/2 sum_j |(M^t)_ij - 1/n|.
  std::vector<double> d;
  /// Same quantity averaged over rows instead of maximised.
  std::vector<double> d_row_mean;
  /// Smallest t with d(t) <= 1/4, if reached within t_max.
  std::optional<std::size_t> mixing_time;
};

/// Distance to uniform of the chain with kernel M from exact powers M^t,
/// t = 1..t_max. M must be doubly stochastic at 1e-8.
MixingReport mixing_profile(const SquareMatrix& m, std::size_t t_max);

}  // namespace birkhoff
