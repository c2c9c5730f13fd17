#include "birkhoff/statistics/mixing.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/error.hpp"

namespace birkhoff {

MixingReport mixing_profile(const SquareMatrix& m, std::size_t t_max) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (t_max < 1) throw PreconditionError("mixing_profile: t_max must be >= 1");
  const auto check = check_doubly_stochastic(m, 1e-8);
  if (!check.ok)
    throw PreconditionError("mixing_profile: matrix not doubly stochastic (violation " +
                            std::to_string(check.max_violation) + ")");

  const auto n = static_cast<Eigen::Index>(m.size());
  const double uniform = 1.0 / static_cast<double>(n);
  const Eigen::Map<const RowMajor> kernel(m.entries().data(), n, n);
  RowMajor power = kernel;

  MixingReport report;
  report.n = m.size();
  for (std::size_t t = 1; t <= t_max; ++t) {
    if (t > 1) power = (power * kernel).eval();
    double worst = 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double row_tv = 0.5 * (power.row(i).array() - uniform).abs().sum();
      worst = std::max(worst, row_tv);
      total += row_tv;
    }
    report.d.push_back(worst);
    report.d_row_mean.push_back(total / static_cast<double>(n));
    if (!report.mixing_time && worst <= kMixingThreshold) report.mixing_time = t;
  }
  return report;
}

}  // namespace birkhoff
