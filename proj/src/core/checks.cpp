#include "birkhoff/core/checks.hpp"

#include <cmath>
#include <string>

#include "birkhoff/core/error.hpp"

namespace birkhoff {

namespace {

constexpr double kClampFloor = -1e-12;
constexpr double kRepairInputSlack = 1e-6;

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

bool compensated(std::size_t n) { return n > 64; }

}  // namespace

std::vector<double> row_sums(const SquareMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    if (compensated(n)) {
      CompensatedSum s;
      for (double v : row) s.add(v);
      out[i] = s.value();
    } else {
      double s = 0.0;
      for (double v : row) s += v;
      out[i] = s;
    }
  }
  return out;
}

std::vector<double> column_sums(const SquareMatrix& m) {
  const std::size_t n = m.size();
  if (!compensated(n)) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = m.row(i);
      for (std::size_t j = 0; j < n; ++j) out[j] += row[j];
    }
    return out;
  }
  std::vector<CompensatedSum> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < n; ++j) acc[j].add(row[j]);
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = acc[j].value();
  return out;
}

StochasticityReport check_doubly_stochastic(const SquareMatrix& m, double tol) {
  if (m.size() == 0) throw PreconditionError("check_doubly_stochastic: empty matrix");
  if (!(tol > 0.0)) throw PreconditionError("check_doubly_stochastic: tol must be positive");

  StochasticityReport report;
  const auto entries = m.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const double v = entries[k];
    if (!std::isfinite(v))
      throw CorruptedStateError("non-finite entry at (" + std::to_string(k / m.size()) + ", " +
                                std::to_string(k % m.size()) + ")");
    if (-v > report.max_violation) {
      report.max_violation = -v;
      report.site = ViolationSite::entry;
      report.index = k;
    }
  }
  const auto rows = row_sums(m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double dev = std::abs(rows[i] - 1.0);
    if (dev > report.max_violation) {
      report.max_violation = dev;
      report.site = ViolationSite::row_sum;
      report.index = i;
    }
  }
  const auto cols = column_sums(m);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double dev = std::abs(cols[j] - 1.0);
    if (dev > report.max_violation) {
      report.max_violation = dev;
      report.site = ViolationSite::column_sum;
      report.index = j;
    }
  }
  report.ok = report.max_violation <= tol;
  return report;
}

std::size_t clamp_rounding_negatives(SquareMatrix& m) {
  std::size_t changed = 0;
  for (double& v : m.entries()) {
    if (v < 0.0 && v >= kClampFloor) {
      v = 0.0;
      ++changed;
    }
  }
  return changed;
}

void sinkhorn_repair_in_place(SquareMatrix& m, double target_tol, std::uint64_t max_iters) {
  clamp_rounding_negatives(m);
  auto report = check_doubly_stochastic(m, target_tol);
  if (report.ok) return;
  if (report.site == ViolationSite::entry)
    throw PreconditionError("sinkhorn_repair: negative entry " + std::to_string(-report.max_violation));
  if (report.max_violation > kRepairInputSlack)
    throw PreconditionError("sinkhorn_repair: margin violation " +
                            std::to_string(report.max_violation) + " exceeds 1e-6");

  const std::size_t n = m.size();
  for (std::uint64_t iter = 1; iter <= max_iters; ++iter) {
    const auto rows = row_sums(m);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(rows[i] > 0.0)) throw CorruptedStateError("sinkhorn_repair: zero row " + std::to_string(i));
      for (double& v : m.row(i)) v /= rows[i];
    }
    const auto cols = column_sums(m);
    for (std::size_t j = 0; j < n; ++j)
      if (!(cols[j] > 0.0)) throw CorruptedStateError("sinkhorn_repair: zero column " + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
      auto row = m.row(i);
      for (std::size_t j = 0; j < n; ++j) row[j] /= cols[j];
    }
    report = check_doubly_stochastic(m, target_tol);
    if (report.ok) return;
  }
  throw ConvergenceError("sinkhorn_repair: no convergence, final violation " +
                             std::to_string(report.max_violation),
                         report.max_violation, max_iters);
}

SquareMatrix sinkhorn_repair(const SquareMatrix& m, double target_tol, std::uint64_t max_iters) {
  SquareMatrix out = m;
  sinkhorn_repair_in_place(out, target_tol, max_iters);
  return out;
}

}  // namespace birkhoff
