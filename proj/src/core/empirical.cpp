#include "birkhoff/core/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/core/error.hpp"

namespace birkhoff {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 32) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw PreconditionError("EmpiricalDistribution: non-finite value");
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
  if (values_.empty()) throw PreconditionError("ecdf of an empty sample");
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (values_.empty()) throw PreconditionError("quantile of an empty sample");
  const double n = static_cast<double>(values_.size());
  auto k = static_cast<std::size_t>(std::ceil(std::clamp(p, 0.0, 1.0) * n));
  k = std::clamp<std::size_t>(k, 1, values_.size());
  return values_[k - 1];
}

double EmpiricalDistribution::mean() const {
  if (values_.empty()) throw PreconditionError("mean of an empty sample");
  return pairwise_sum(values_) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::variance() const {
  if (values_.size() < 2) return 0.0;
  const double mu = mean();
  std::vector<double> sq(values_.size());
  std::transform(values_.begin(), values_.end(), sq.begin(),
                 [mu](double v) { return (v - mu) * (v - mu); });
  return pairwise_sum(sq) / static_cast<double>(values_.size() - 1);
}

}  // namespace birkhoff
