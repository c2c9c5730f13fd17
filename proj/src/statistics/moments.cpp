#include "birkhoff/statistics/moments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/error.hpp"
#include "birkhoff/core/random.hpp"
#include "birkhoff/statistics/distances.hpp"

namespace birkhoff {

void MomentSpec::validate(std::size_t n) const {
  if (positions.empty()) throw PreconditionError("MomentSpec: no positions");
  if (positions.size() != exponents.size())
    throw PreconditionError("MomentSpec: positions and exponents differ in length");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : positions) {
    if (p.first >= n || p.second >= n)
      throw PreconditionError("MomentSpec: position (" + std::to_string(p.first) + ", " +
                              std::to_string(p.second) + ") outside a " + std::to_string(n) +
                              "x" + std::to_string(n) + " matrix");
    if (!seen.insert(p).second) throw PreconditionError("MomentSpec: repeated position");
  }
  for (unsigned e : exponents)
    if (e < 1) throw PreconditionError("MomentSpec: exponents must be >= 1");
}

double moment_product(const SquareMatrix& m, const MomentSpec& spec) {
  const double n = static_cast<double>(m.size());
  double product = 1.0;
  for (std::size_t k = 0; k < spec.positions.size(); ++k) {
    const double v = n * m(spec.positions[k].first, spec.positions[k].second);
    for (unsigned e = 0; e < spec.exponents[k]; ++e) product *= v;
  }
  return product;
}

MomentEstimate mean_with_error(const std::vector<double>& values) {
  if (values.empty()) throw PreconditionError("mean_with_error: no values");
  MomentEstimate out;
  out.count = values.size();
  const double n = static_cast<double>(values.size());
  out.mean = pairwise_sum(values) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(),
                   [&](double v) { return (v - out.mean) * (v - out.mean); });
    out.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return out;
}

MomentEstimate joint_moments(const SampleBatch& batch, const MomentSpec& spec) {
  spec.validate(batch.n());
  std::vector<double> values;
  values.reserve(batch.size());
  for (const auto& m : batch) values.push_back(moment_product(m, spec));
  return mean_with_error(values);
}

namespace {

double max_entry_threshold(std::size_t n, double epsilon) {
  return (2.0 + epsilon) * std::log(static_cast<double>(n)) / static_cast<double>(n);
}

}  // namespace

bool exceeds_max_entry_bound(const SquareMatrix& m, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("max entry test: epsilon must be positive");
  return m.max_entry() > max_entry_threshold(m.size(), epsilon);
}

ExceedanceReport max_entry_stat(const SampleBatch& batch, double epsilon) {
  if (batch.empty()) throw PreconditionError("max_entry_stat: empty batch");
  ExceedanceReport out;
  out.count = batch.size();
  out.threshold = max_entry_threshold(batch.n(), epsilon);
  for (const auto& m : batch)
    if (exceeds_max_entry_bound(m, epsilon)) ++out.exceeding;
  out.fraction = static_cast<double>(out.exceeding) / static_cast<double>(out.count);
  return out;
}

std::vector<double> rescaled_block(const SquareMatrix& m, std::size_t k) {
  if (k > m.size()) throw PreconditionError("rescaled_block: k exceeds n");
  const double n = static_cast<double>(m.size());
  std::vector<double> out;
  out.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out.push_back(n * m(i, j));
  return out;
}

namespace {

std::optional<double> max_abs_correlation(const std::vector<double>& blocks, std::size_t dim) {
  const std::size_t count = blocks.size() / dim;
  std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> col(count);
    for (std::size_t s = 0; s < count; ++s) col[s] = blocks[s * dim + c];
    mean[c] = pairwise_sum(col) / static_cast<double>(count);
    for (double& v : col) v = (v - mean[c]) * (v - mean[c]);
    sd[c] = std::sqrt(pairwise_sum(col));
    if (!(sd[c] > 0.0)) return std::nullopt;
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a + 1; b < dim; ++b) {
      std::vector<double> prod(count);
      for (std::size_t s = 0; s < count; ++s)
        prod[s] = (blocks[s * dim + a] - mean[a]) * (blocks[s * dim + b] - mean[b]);
      worst = std::max(worst, std::abs(pairwise_sum(prod) / (sd[a] * sd[b])));
    }
  }
  return worst;
}

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

}  // namespace

SubmatrixReport submatrix_independence_test(const std::vector<double>& blocks, std::size_t n,
                                            std::size_t k, std::uint64_t reference_seed) {
  const std::size_t dim = k * k;
  if (k < 1 || blocks.empty() || blocks.size() % dim != 0)
    throw PreconditionError("submatrix_independence_test: blocks must hold whole k x k blocks");
  if (dim > n) throw PreconditionError("submatrix_independence_test: need k^2 <= n");

  SubmatrixReport report;
  report.k = k;
  report.samples = blocks.size() / dim;
  const double regime = std::sqrt(static_cast<double>(n)) / std::log(std::max<double>(n, 3.0));
  if (static_cast<double>(k) > regime)
    report.warnings.push_back("k = " + std::to_string(k) + " exceeds sqrt(n)/log(n) = " +
                              std::to_string(regime) + "; outside the asymptotic regime");

  report.max_abs_correlation = max_abs_correlation(blocks, dim);
  report.zero_variance = !report.max_abs_correlation.has_value();
  if (report.zero_variance) report.warnings.push_back("zero variance coordinate; correlation undefined");

  const double blocks_self = mean_self_distance(blocks, dim);
  double target[3], self[3];
  for (std::uint64_t r = 0; r < 3; ++r) {
    RandomStream first(reference_seed, 2 * r);
    RandomStream second(reference_seed, 2 * r + 1);
    std::vector<double> ref_a(blocks.size()), ref_b(blocks.size());
    for (double& v : ref_a) v = first.exponential();
    for (double& v : ref_b) v = second.exponential();
    const double a_self = mean_self_distance(ref_a, dim);
    const double b_self = mean_self_distance(ref_b, dim);
    target[r] = std::max(0.0, 2.0 * mean_cross_distance(blocks, ref_a, dim) - blocks_self - a_self);
    self[r] = std::max(0.0, 2.0 * mean_cross_distance(ref_a, ref_b, dim) - a_self - b_self);
  }
  report.energy_distance = median3(target[0], target[1], target[2]);
  report.reference_self_distance = median3(self[0], self[1], self[2]);
  return report;
}

SubmatrixReport submatrix_independence_test(const SampleBatch& batch, std::size_t k,
                                            std::uint64_t reference_seed) {
  std::vector<double> blocks;
  blocks.reserve(batch.size() * k * k);
  for (const auto& m : batch) {
    const auto b = rescaled_block(m, k);
    blocks.insert(blocks.end(), b.begin(), b.end());
  }
  return submatrix_independence_test(blocks, batch.n(), k, reference_seed);
}

}  // namespace birkhoff
