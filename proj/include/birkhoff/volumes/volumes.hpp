#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/matrix.hpp"
#include "birkhoff/core/parallel.hpp"
#include "birkhoff/statistics/distances.hpp"

namespace birkhoff {

// Volumes are Lebesgue measures of the projection of a transportation
// polytope onto its leading (m-1) x (n-1) block.

enum class VolumeMethod { rejection, asymptotic, convolution };

std::string_view to_string(VolumeMethod method);

struct VolumeEstimate {
  double log_volume = 0.0;
  /// Standard error of log_volume (delta method for rejection estimates).
  double std_error = 0.0;
  VolumeMethod method = VolumeMethod::rejection;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  double volume() const;
  /// Standard error on the linear scale.
  double volume_std_error() const { return volume() * std_error; }
};

/// Largest free dimension mc_volume accepts.
inline constexpr std::size_t kMaxRejectionDimension = 20;

/// Rejection estimate: the free block is drawn uniformly in
/// prod [0, min(a_i, b_j)] and accepted iff the forced last column, last
/// row and corner are nonnegative; volume = acceptance rate * box volume.
/// Throws ProposalCapError when nothing is accepted.
VolumeEstimate mc_volume(const MarginSpec& spec, std::uint64_t proposals, std::uint64_t seed,
                         const ChainPlan& plan = {});

/// Log of the asymptotic Birkhoff polytope volume with the o(1) term set to 0.
double canfield_mckay_birkhoff(std::size_t n);

/// Log of the asymptotic volume of the constant-margin m x n polytope with
/// total m (row sums 1, column sums m/n), o(1) set to 0.
double canfield_mckay_rect(std::size_t m, std::size_t n);

/// The same at an arbitrary total, rescaled by homogeneity of degree
/// (m-1)(n-1).
double canfield_mckay_rect(std::size_t m, std::size_t n, double total);

/// Density of a sum of independent U[0, a_i].
///
/// Exact inclusion-exclusion (long double) for up to
/// kInclusionExclusionMax summands, grid convolution with 2^16 cells
/// beyond. Zero outside [0, sum a_i].
class UniformSumDensity {
 public:
  static constexpr std::size_t kInclusionExclusionMax = 12;

  explicit UniformSumDensity(std::vector<double> bounds);

  double operator()(double r) const;
  double total() const noexcept { return total_; }
  std::span<const double> bounds() const noexcept { return bounds_; }
  bool exact() const noexcept { return grid_.empty(); }

 private:
  double inclusion_exclusion(double r) const;

  std::vector<double> bounds_;
  double total_ = 0.0;
  long double normaliser_ = 1.0L;
  std::vector<double> grid_;  // convolution density at total * k / (grid_.size() - 1)
};

double uniform_sum_density(std::span<const double> bounds, double r);

struct MaxAtHalfReport {
  bool ok = false;
  bool max_near_half = false;
  bool log_concave = false;
  std::size_t argmax = 0;
  double max_value = 0.0;
  /// Largest second difference of log f over interior grid points with f > 0.
  double worst_log_second_difference = 0.0;
  std::vector<double> r;
  std::vector<double> density;
};

/// Evaluates the uniform-sum density on `grid` equally spaced points of
/// [0, t]. Passes iff the grid maximum is attained within one cell of t/2
/// and the discrete second differences of log f are all <= 1e-9.
MaxAtHalfReport verify_max_at_half(std::span<const double> bounds, std::size_t grid);

struct MaximalityTrial {
  std::vector<double> row_sums;
  std::vector<double> col_sums;
  VolumeEstimate estimate;
  /// (V_perturbed - V_constant) / combined standard error.
  double z_score = 0.0;
  bool violation = false;
};

struct MaximalityReport {
  std::size_t m = 0;
  std::size_t n = 0;
  double total = 0.0;
  VolumeEstimate constant;
  std::vector<MaximalityTrial> trials;
  std::size_t violations = 0;
};

/// Concentration of each symmetric Dirichlet margin perturbation.
inline constexpr double kMarginPerturbationConcentration = 50.0;

/// Compares the constant-margin volume with `trials` Dirichlet-perturbed
/// margin vectors at the same total t = m; a violation is a perturbed
/// volume exceeding the constant one by more than 3 combined standard
/// errors. Requires (m-1)(n-1) <= 9.
MaximalityReport verify_constant_margin_maximality(std::size_t m, std::size_t n, std::size_t trials,
                                                   std::uint64_t proposals, std::uint64_t seed,
                                                   const ChainPlan& plan = {});

/// e^{r/2}: asymptotic bound on the density of the first r rows of a
/// uniform doubly stochastic matrix relative to independent uniform rows.
double radon_nikodym_ratio(std::size_t r, std::size_t n);

struct DensityRatioBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t target_count = 0;
  std::size_t base_count = 0;
  double ratio = 0.0;
};

struct DensityRatioReport {
  std::vector<DensityRatioBin> bins;
  /// Maximum ratio over bins where both counts reach min_count.
  double max_ratio = 0.0;
  std::size_t qualifying_bins = 0;
};

/// Histogram estimate of d(target)/d(base) on a shared grid.
DensityRatioReport binned_density_ratio(const EmpiricalDistribution& target,
                                        const EmpiricalDistribution& base, const BinGrid& grid,
                                        std::size_t min_count);

}  // namespace birkhoff
