#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/matrix.hpp"

namespace birkhoff {

/// Product moment E prod_k (n X_{i_k j_k})^{alpha_k}. Positions are 0-based.
struct MomentSpec {
  std::vector<std::pair<std::size_t, std::size_t>> positions;
  std::vector<unsigned> exponents;

  /// Throws PreconditionError on repeated positions, zero exponents, length
  /// mismatch or positions outside an n x n matrix.
  void validate(std::size_t n) const;
};

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// prod_k (n M_{i_k j_k})^{alpha_k} for one matrix.
double moment_product(const SquareMatrix& m, const MomentSpec& spec);

MomentEstimate joint_moments(const SampleBatch& batch, const MomentSpec& spec);
/// From already-evaluated per-matrix products.
MomentEstimate mean_with_error(const std::vector<double>& values);

/// True iff max_ij M_ij > (2 + epsilon) ln(n) / n.
bool exceeds_max_entry_bound(const SquareMatrix& m, double epsilon);

struct ExceedanceReport {
  double fraction = 0.0;
  std::size_t exceeding = 0;
  std::size_t count = 0;
  /// (2 + epsilon) ln(n) / n.
  double threshold = 0.0;
};

ExceedanceReport max_entry_stat(const SampleBatch& batch, double epsilon);

/// Leading k x k block scaled by n, row-major.
std::vector<double> rescaled_block(const SquareMatrix& m, std::size_t k);

struct SubmatrixReport {
  std::size_t k = 0;
  std::size_t samples = 0;
  /// Largest |Pearson correlation| over pairs of block coordinates; empty
  /// when some coordinate has zero variance.
  std::optional<double> max_abs_correlation;
  bool zero_variance = false;
  /// Median over three reference draws of the energy distance from the
  /// blocks to an equal-size iid Exp(1) sample.
  double energy_distance = 0.0;
  /// Median over three draws of the energy distance between two
  /// independent iid Exp(1) samples of the same size.
  double reference_self_distance = 0.0;
  std::vector<std::string> warnings;
};

/// Blocks are stored contiguously, k*k coordinates each. `reference_seed`
/// drives the iid Exp(1) reference draws.
SubmatrixReport submatrix_independence_test(const std::vector<double>& blocks, std::size_t n,
                                            std::size_t k, std::uint64_t reference_seed);

SubmatrixReport submatrix_independence_test(const SampleBatch& batch, std::size_t k,
                                            std::uint64_t reference_seed);

}  // namespace birkhoff
