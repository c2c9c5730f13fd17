#include "birkhoff/statistics/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/error.hpp"

namespace birkhoff {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

DistanceReport w1_report(const EmpiricalDistribution& sample, const ReferenceLaw& law) {
  return DistanceReport{Statistic::wasserstein1, wasserstein1(sample, law), 0.0, {sample.size()}, law.name()};
}

}  // namespace

EmpiricalDistribution rescaled_singular_values(const SquareMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (n == 0) throw PreconditionError("singular values of an empty matrix");
  const double scale = std::sqrt(static_cast<double>(n));
  const double centre = 1.0 / static_cast<double>(n);
  RowMajor centred = (Eigen::Map<const RowMajor>(m.entries().data(), n, n).array() - centre) * scale;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centred);
  if (svd.info() != Eigen::Success)
    throw ConvergenceError("SVD failed (Eigen status " + std::to_string(static_cast<int>(svd.info())) +
                               ") for n = " + std::to_string(n),
                           0.0, 0);
  const auto& s = svd.singularValues();
  return EmpiricalDistribution(std::vector<double>(s.data(), s.data() + s.size()));
}

EmpiricalDistribution singular_values(const SquareMatrix& m) {
  const auto report = check_doubly_stochastic(m, 1e-8);
  if (!report.ok)
    throw PreconditionError("singular_values: matrix not doubly stochastic (violation " +
                            std::to_string(report.max_violation) + ")");
  return rescaled_singular_values(m);
}

double frobenius_identity_error(const SquareMatrix& m, const EmpiricalDistribution& sigma) {
  const double n = static_cast<double>(m.size());
  std::vector<double> dev;
  dev.reserve(m.entries().size());
  for (double v : m.entries()) dev.push_back((v - 1.0 / n) * (v - 1.0 / n));
  const double rhs = n * pairwise_sum(dev);
  std::vector<double> sq;
  sq.reserve(sigma.size());
  for (double s : sigma.values()) sq.push_back(s * s);
  const double lhs = pairwise_sum(sq);
  const double diff = std::abs(lhs - rhs);
  return rhs > 0.0 ? diff / rhs : diff;
}

SpectralReport spectral_test(const EmpiricalDistribution& pooled) {
  if (pooled.empty()) throw PreconditionError("spectral_test: no singular values");
  SpectralReport report;
  report.quarter_circle = w1_report(pooled, ReferenceLaw::quarter_circle());
  report.pooled = pooled;
  // x -> x^2 is nondecreasing on [0, inf), so order is preserved.
  report.squared = w1_report(pooled.transformed([](double s) { return s * s; }),
                             ReferenceLaw::squared_quarter_circle());
  return report;
}

SpectralReport spectral_test(const SampleBatch& batch) {
  if (batch.empty()) throw PreconditionError("spectral_test: empty batch");
  std::vector<double> all;
  all.reserve(batch.size() * batch.n());
  double worst = 0.0;
  for (const auto& m : batch) {
    const auto sigma = rescaled_singular_values(m);
    worst = std::max(worst, frobenius_identity_error(m, sigma));
    all.insert(all.end(), sigma.values().begin(), sigma.values().end());
  }
  auto report = spectral_test(EmpiricalDistribution(std::move(all)));
  report.max_frobenius_error = worst;
  return report;
}

}  // namespace birkhoff
