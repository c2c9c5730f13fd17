#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace birkhoff {

/// Sorted sample with ECDF and quantile accessors.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  /// Sorts the values; throws PreconditionError on non-finite input.
  explicit EmpiricalDistribution(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  /// Fraction of values <= x.
  double ecdf(double x) const;
  /// Lower empirical quantile: smallest value whose ECDF is >= p.
  double quantile(double p) const;

  double mean() const;
  /// Unbiased sample variance; 0 for a single value.
  double variance() const;

  /// Image of the sample under a nondecreasing map on its range.
  template <class F>
  EmpiricalDistribution transformed(F&& f) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (double v : values_) out.push_back(f(v));
    return EmpiricalDistribution(std::move(out));
  }

 private:
  std::vector<double> values_;
};

/// Fixed-order pairwise summation; reproducible regardless of caller.
double pairwise_sum(std::span<const double> values);

}  // namespace birkhoff
