#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "birkhoff/core/matrix.hpp"

namespace birkhoff {

/// Where the worst violation of a doubly stochastic check was found.
enum class ViolationSite { none, row_sum, column_sum, entry };

struct StochasticityReport {
  bool ok = true;
  /// Largest |sum - 1| over rows/columns, or -entry for a negative entry.
  double max_violation = 0.0;
  ViolationSite site = ViolationSite::none;
  /// Row or column index for sums; row-major flat index for entries.
  std::size_t index = 0;

  explicit operator bool() const noexcept { return ok; }
};

/// True iff every row and column sum is within tol of 1 and every entry is
/// >= -tol. Throws CorruptedStateError on a non-finite entry.
StochasticityReport check_doubly_stochastic(const SquareMatrix& m, double tol);

/// Row sums, compensated (Neumaier) for n > 64.
std::vector<double> row_sums(const SquareMatrix& m);
std::vector<double> column_sums(const SquareMatrix& m);

/// Sets entries in [-1e-12, 0) to exactly 0; returns how many changed.
std::size_t clamp_rounding_negatives(SquareMatrix& m);

/// Alternating row/column normalisation back to exact unit margins.
///
/// Input must be near doubly stochastic (margins within 1e-6 of 1) with no
/// entry below -1e-12. A matrix already passing the check at target_tol is
/// returned unchanged. Throws ConvergenceError after max_iters sweeps.
SquareMatrix sinkhorn_repair(const SquareMatrix& m, double target_tol, std::uint64_t max_iters = 1000);

/// In-place form used by long chains.
void sinkhorn_repair_in_place(SquareMatrix& m, double target_tol, std::uint64_t max_iters = 1000);

}  // namespace birkhoff
