#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/reference_law.hpp"

namespace birkhoff {

enum class Statistic { ks, tv_binned, wasserstein1, energy };

std::string_view to_string(Statistic s);

struct DistanceReport {
  Statistic statistic = Statistic::ks;
  double value = 0.0;
  /// Standard error when the estimator provides one, else 0.
  double std_error = 0.0;
  std::vector<std::size_t> sample_sizes;
  /// Reference law or binning/grid description.
  std::string grid;
};

/// One-sample Kolmogorov-Smirnov statistic sup |ECDF - F|, evaluating both
/// sides of every ECDF jump.
double ks_distance(const EmpiricalDistribution& sample, const ReferenceLaw& law);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Equal-width bins on [lo, hi]; mass outside goes to two overflow cells.
struct BinGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 64;
};

struct TvEstimate {
  double value = 0.0;
  /// Delta-method standard error sqrt((1 - (sum_b s_b p_b)^2) / 4N), s_b the
  /// sign of the empirical-minus-law mass difference in bin b.
  double std_error = 0.0;
  BinGrid grid;
};

/// Half the L1 distance between binned empirical and law masses on an
/// explicit grid. A lower bound (in expectation, up to noise) of the TV
/// distance. Always in [0, 1].
TvEstimate tv_binned(const EmpiricalDistribution& sample, const ReferenceLaw& law, const BinGrid& grid);

/// As above on [min(support lo, sample min), max(sample max, law 0.9999
/// quantile)] with `bins` equal bins; bins >= 2.
TvEstimate tv_binned(const EmpiricalDistribution& sample, const ReferenceLaw& law, std::size_t bins);

/// W1 by quantile matching: mean_k |x_(k) - F^{-1}((k - 1/2) / N)|.
/// Exactly 0 when the sample consists of those quantiles.
double wasserstein1(const EmpiricalDistribution& sample, const ReferenceLaw& law);

/// Exact W1 between two empirical laws: integral of |F_a - F_b|.
double wasserstein1_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Energy distance 2E|X-Y| - E|X-X'| - E|Y-Y'| between two point clouds in
/// R^dim (V-statistic form, so never negative). Points are stored
/// contiguously, `dim` coordinates each.
double energy_distance(std::span<const double> x, std::span<const double> y, std::size_t dim);

/// Building blocks of energy_distance(): mean distance over all cross
/// pairs, and over all ordered pairs within one cloud (diagonal included).
double mean_cross_distance(std::span<const double> x, std::span<const double> y, std::size_t dim);
double mean_self_distance(std::span<const double> x, std::size_t dim);

/// Two-sample binned TV for a pair of coordinates, on a product grid whose
/// cuts are the pooled sample's marginal quantiles (bins_per_axis per axis).
double tv_binned_2d(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by, std::size_t bins_per_axis);

}  // namespace birkhoff
