#include "birkhoff/statistics/distances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "birkhoff/core/error.hpp"

namespace birkhoff {

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::ks: return "KS";
    case Statistic::tv_binned: return "TV_binned";
    case Statistic::wasserstein1: return "Wasserstein1";
    case Statistic::energy: return "Energy";
  }
  return "unknown";
}

double ks_distance(const EmpiricalDistribution& sample, const ReferenceLaw& law) {
  if (sample.empty()) throw PreconditionError("ks_distance: empty sample");
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = law.cdf(sample[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return std::min(d, 1.0);
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.empty() || b.empty()) throw PreconditionError("ks_two_sample: empty sample");
  const auto va = a.values();
  const auto vb = b.values();
  const auto na = static_cast<double>(va.size());
  const auto nb = static_cast<double>(vb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < va.size() && j < vb.size()) {
    const double x = std::min(va[i], vb[j]);
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

TvEstimate tv_binned(const EmpiricalDistribution& sample, const ReferenceLaw& law, const BinGrid& grid) {
  if (sample.empty()) throw PreconditionError("tv_binned: empty sample");
  if (grid.bins < 2) throw PreconditionError("tv_binned: need at least 2 bins");
  if (!(grid.lo < grid.hi)) throw PreconditionError("tv_binned: grid needs lo < hi");

  // Cells: [-inf, lo), bins equal cells on [lo, hi], (hi, inf].
  const std::size_t cells = grid.bins + 2;
  std::vector<double> empirical(cells, 0.0);
  const double width = (grid.hi - grid.lo) / static_cast<double>(grid.bins);
  for (double v : sample.values()) {
    std::size_t c;
    if (v < grid.lo) {
      c = 0;
    } else if (v > grid.hi) {
      c = cells - 1;
    } else {
      c = 1 + std::min(grid.bins - 1, static_cast<std::size_t>((v - grid.lo) / width));
    }
    empirical[c] += 1.0;
  }
  const auto n = static_cast<double>(sample.size());
  for (double& e : empirical) e /= n;

  std::vector<double> expected(cells);
  double previous = 0.0;
  for (std::size_t b = 0; b <= grid.bins; ++b) {
    const double edge = b == grid.bins ? grid.hi : grid.lo + width * static_cast<double>(b);
    const double f = law.cdf(edge);
    expected[b] = f - previous;
    previous = f;
  }
  expected[cells - 1] = 1.0 - previous;

  double l1 = 0.0;
  double signed_mass = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double diff = empirical[c] - expected[c];
    l1 += std::abs(diff);
    if (diff > 0.0) signed_mass += empirical[c];
    if (diff < 0.0) signed_mass -= empirical[c];
  }
  TvEstimate out;
  out.value = std::clamp(0.5 * l1, 0.0, 1.0);
  out.std_error = std::sqrt(std::max(0.0, 1.0 - signed_mass * signed_mass) / (4.0 * n));
  out.grid = grid;
  return out;
}

TvEstimate tv_binned(const EmpiricalDistribution& sample, const ReferenceLaw& law, std::size_t bins) {
  if (sample.empty()) throw PreconditionError("tv_binned: empty sample");
  const auto [support_lo, support_hi] = law.support();
  const double lo = std::min(support_lo, sample.min());
  double hi = std::max(sample.max(), law.quantile(0.9999));
  if (!(hi > lo)) hi = lo + 1.0;
  return tv_binned(sample, law, BinGrid{lo, hi, bins});
}

double wasserstein1(const EmpiricalDistribution& sample, const ReferenceLaw& law) {
  if (sample.empty()) throw PreconditionError("wasserstein1: empty sample");
  const auto n = static_cast<double>(sample.size());
  std::vector<double> gaps(sample.size());
  for (std::size_t k = 0; k < sample.size(); ++k)
    gaps[k] = std::abs(sample[k] - law.quantile((static_cast<double>(k) + 0.5) / n));
  return pairwise_sum(gaps) / n;
}

double wasserstein1_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.empty() || b.empty()) throw PreconditionError("wasserstein1_two_sample: empty sample");
  const auto va = a.values();
  const auto vb = b.values();
  const auto na = static_cast<double>(va.size());
  const auto nb = static_cast<double>(vb.size());
  std::size_t i = 0, j = 0;
  double x = std::min(va[0], vb[0]);
  double total = 0.0;
  while (i < va.size() || j < vb.size()) {
    const double next = j >= vb.size() || (i < va.size() && va[i] <= vb[j]) ? va[i] : vb[j];
    total += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) * (next - x);
    x = next;
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
  }
  return total;
}

namespace {

inline double euclidean(const double* p, const double* q, std::size_t dim) {
  double d2 = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double t = p[c] - q[c];
    d2 += t * t;
  }
  return std::sqrt(d2);
}

void check_cloud(std::span<const double> x, std::size_t dim) {
  if (dim == 0 || x.empty() || x.size() % dim != 0)
    throw PreconditionError("energy distance: point clouds must be nonempty multiples of dim");
}

}  // namespace

double mean_cross_distance(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  check_cloud(x, dim);
  check_cloud(y, dim);
  const std::size_t nx = x.size() / dim;
  const std::size_t ny = y.size() / dim;
  std::vector<double> row_totals(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double* p = x.data() + i * dim;
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) s += euclidean(p, y.data() + j * dim, dim);
    row_totals[i] = s;
  }
  return pairwise_sum(row_totals) / (static_cast<double>(nx) * static_cast<double>(ny));
}

double mean_self_distance(std::span<const double> x, std::size_t dim) {
  check_cloud(x, dim);
  const std::size_t nx = x.size() / dim;
  std::vector<double> row_totals(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double* p = x.data() + i * dim;
    double s = 0.0;
    for (std::size_t j = i + 1; j < nx; ++j) s += euclidean(p, x.data() + j * dim, dim);
    row_totals[i] = s;
  }
  return 2.0 * pairwise_sum(row_totals) / (static_cast<double>(nx) * static_cast<double>(nx));
}

double energy_distance(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  const double value = 2.0 * mean_cross_distance(x, y, dim) - mean_self_distance(x, dim) -
                       mean_self_distance(y, dim);
  return std::max(value, 0.0);
}

namespace {

std::vector<double> quantile_edges(std::span<const double> a, std::span<const double> b, std::size_t bins) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  for (std::size_t k = 1; k < bins; ++k) edges.push_back(pooled[k * pooled.size() / bins]);
  return edges;
}

std::size_t cell_of(const std::vector<double>& edges, double v) {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
}

}  // namespace

double tv_binned_2d(std::span<const double> ax, std::span<const double> ay, std::span<const double> bx,
                    std::span<const double> by, std::size_t bins_per_axis) {
  if (ax.size() != ay.size() || bx.size() != by.size() || ax.empty() || bx.empty())
    throw PreconditionError("tv_binned_2d: coordinate vectors must be nonempty and paired");
  if (bins_per_axis < 2) throw PreconditionError("tv_binned_2d: need at least 2 bins per axis");
  const auto ex = quantile_edges(ax, bx, bins_per_axis);
  const auto ey = quantile_edges(ay, by, bins_per_axis);
  std::vector<double> diff(bins_per_axis * bins_per_axis, 0.0);
  const double wa = 1.0 / static_cast<double>(ax.size());
  const double wb = 1.0 / static_cast<double>(bx.size());
  for (std::size_t k = 0; k < ax.size(); ++k)
    diff[cell_of(ex, ax[k]) * bins_per_axis + cell_of(ey, ay[k])] += wa;
  for (std::size_t k = 0; k < bx.size(); ++k)
    diff[cell_of(ex, bx[k]) * bins_per_axis + cell_of(ey, by[k])] -= wb;
  double l1 = 0.0;
  for (double d : diff) l1 += std::abs(d);
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

}  // namespace birkhoff
