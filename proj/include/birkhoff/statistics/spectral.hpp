#pragma once

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/matrix.hpp"
#include "birkhoff/statistics/distances.hpp"

namespace birkhoff {

/// Singular values of sqrt(n) (M - J/n), J the all-ones matrix, ascending.
/// No stochasticity check, so comparison models can be fed through it.
/// Throws ConvergenceError if the SVD does not succeed.
EmpiricalDistribution rescaled_singular_values(const SquareMatrix& m);

/// rescaled_singular_values() for a doubly stochastic M (checked at 1e-8).
EmpiricalDistribution singular_values(const SquareMatrix& m);

/// |sum sigma^2 - n sum (M_ij - 1/n)^2| relative to the right-hand side
/// (absolute when that is 0).
double frobenius_identity_error(const SquareMatrix& m, const EmpiricalDistribution& sigma);

struct SpectralReport {
  /// Pooled sigma against the quarter-circle law.
  DistanceReport quarter_circle;
  /// Pooled sigma^2 against its image law on [0, 4].
  DistanceReport squared;
  EmpiricalDistribution pooled;
  double max_frobenius_error = 0.0;
};

/// Pools singular values over the batch and compares with both limit laws
/// by W1.
SpectralReport spectral_test(const SampleBatch& batch);
SpectralReport spectral_test(const EmpiricalDistribution& pooled);

}  // namespace birkhoff
