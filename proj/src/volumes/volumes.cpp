#include "birkhoff/volumes/volumes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "birkhoff/core/error.hpp"
#include "birkhoff/core/random.hpp"

namespace birkhoff {

std::string_view to_string(VolumeMethod method) {
  switch (method) {
    case VolumeMethod::rejection: return "rejection";
    case VolumeMethod::asymptotic: return "asymptotic";
    case VolumeMethod::convolution: return "convolution";
  }
  return "unknown";
}

double VolumeEstimate::volume() const { return std::exp(log_volume); }

namespace {

struct Counts {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

Counts rejection_counts(const MarginSpec& spec, std::uint64_t proposals, RandomStream& stream) {
  const std::size_t m = spec.rows();
  const std::size_t n = spec.cols();
  const auto a = spec.row_sums();
  const auto b = spec.col_sums();
  const std::size_t fr = m - 1;
  const std::size_t fc = n - 1;
  std::vector<double> upper(fr * fc);
  for (std::size_t i = 0; i < fr; ++i)
    for (std::size_t j = 0; j < fc; ++j) upper[i * fc + j] = std::min(a[i], b[j]);

  std::vector<double> block(fr * fc);
  std::vector<double> col(fc);
  Counts counts;
  for (std::uint64_t p = 0; p < proposals; ++p) {
    ++counts.proposals;
    for (std::size_t k = 0; k < block.size(); ++k) block[k] = upper[k] * stream.uniform();
    std::fill(col.begin(), col.end(), 0.0);
    bool ok = true;
    double last_column = 0.0;  // sum over i < m of the forced entries x_{i,n}
    for (std::size_t i = 0; i < fr && ok; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < fc; ++j) {
        row += block[i * fc + j];
        col[j] += block[i * fc + j];
      }
      const double forced = a[i] - row;
      ok = forced >= 0.0;
      last_column += forced;
    }
    for (std::size_t j = 0; j < fc && ok; ++j) ok = b[j] - col[j] >= 0.0;
    ok = ok && b[fc] - last_column >= 0.0;
    if (ok) ++counts.accepted;
  }
  return counts;
}

}  // namespace

VolumeEstimate mc_volume(const MarginSpec& spec, std::uint64_t proposals, std::uint64_t seed,
                         const ChainPlan& plan) {
  const std::size_t dim = spec.free_dimension();
  if (dim > kMaxRejectionDimension)
    throw PreconditionError("mc_volume: free dimension " + std::to_string(dim) + " exceeds " +
                            std::to_string(kMaxRejectionDimension));
  if (proposals < 1) throw PreconditionError("mc_volume: need at least one proposal");

  VolumeEstimate out;
  out.method = VolumeMethod::rejection;
  if (dim == 0) {
    // A single point; its 0-dimensional volume is 1.
    out.proposals = out.accepted = proposals;
    return out;
  }

  const std::size_t chains = std::max<std::size_t>(plan.chains, 1);
  std::vector<Counts> parts(chains);
  for_each_chain(ChainPlan{chains, plan.workers}, [&](std::size_t c) {
    RandomStream stream(seed, c);
    parts[c] = rejection_counts(spec, chain_share(proposals, chains, c), stream);
  });
  for (const auto& p : parts) {
    out.proposals += p.proposals;
    out.accepted += p.accepted;
  }
  if (out.accepted == 0)
    throw ProposalCapError("mc_volume: no acceptances in " + std::to_string(out.proposals) + " proposals",
                           out.proposals, 0);

  double log_box = 0.0;
  const auto a = spec.row_sums();
  const auto b = spec.col_sums();
  for (std::size_t i = 0; i + 1 < spec.rows(); ++i)
    for (std::size_t j = 0; j + 1 < spec.cols(); ++j) log_box += std::log(std::min(a[i], b[j]));
  const double p = static_cast<double>(out.accepted) / static_cast<double>(out.proposals);
  out.log_volume = std::log(p) + log_box;
  out.std_error = std::sqrt((1.0 - p) / (p * static_cast<double>(out.proposals)));
  return out;
}

double canfield_mckay_birkhoff(std::size_t n) {
  if (n < 2) throw PreconditionError("canfield_mckay_birkhoff: n must be >= 2");
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  return -(nn - 1.0) * log_n - (nn - 0.5) * log_2pi - (nn - 1.0) * (nn - 1.0) * log_n + 1.0 / 3.0 + nn * nn;
}

double canfield_mckay_rect(std::size_t m, std::size_t n) {
  if (m < 2 || n < 2) throw PreconditionError("canfield_mckay_rect: m and n must be >= 2");
  const double mm = static_cast<double>(m);
  const double nn = static_cast<double>(n);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  const double skew = (mm - nn) * (mm - nn) / (12.0 * mm * nn);
  return -0.5 * (nn - 1.0) * std::log(mm) - 0.5 * (mm - 1.0) * std::log(nn) -
         0.5 * (mm + nn - 1.0) * log_2pi - (mm - 1.0) * (nn - 1.0) * std::log(nn) + 1.0 / 3.0 +
         mm * nn - skew;
}

double canfield_mckay_rect(std::size_t m, std::size_t n, double total) {
  if (!(total > 0.0)) throw PreconditionError("canfield_mckay_rect: total must be positive");
  const double dim = static_cast<double>((m - 1) * (n - 1));
  return canfield_mckay_rect(m, n) + dim * std::log(total / static_cast<double>(m));
}

namespace {

constexpr std::size_t kConvolutionCells = std::size_t{1} << 16;

// Density of the sum on total * k / cells by repeated convolution with
// uniform densities, each step g <- (G(x) - G(x - a)) / a with G the
// trapezoid running integral of g, interpolated linearly.
std::vector<double> convolve_uniforms(std::span<const double> bounds, double total) {
  const std::size_t cells = kConvolutionCells;
  const double h = total / static_cast<double>(cells);
  std::vector<double> g(cells + 1, 0.0);
  // Point mass at 0, smeared over the first cell so the first step yields
  // the first uniform density.
  g[0] = 2.0 / h;
  std::vector<double> cumulative(cells + 1);
  for (double a : bounds) {
    cumulative[0] = 0.0;
    for (std::size_t k = 1; k <= cells; ++k) cumulative[k] = cumulative[k - 1] + 0.5 * h * (g[k - 1] + g[k]);
    auto integral_to = [&](double x) {
      if (x <= 0.0) return 0.0;
      const double pos = x / h;
      const auto k = static_cast<std::size_t>(pos);
      if (k >= cells) return cumulative[cells];
      const double frac = pos - static_cast<double>(k);
      return cumulative[k] + frac * (cumulative[k + 1] - cumulative[k]);
    };
    std::vector<double> next(cells + 1);
    for (std::size_t k = 0; k <= cells; ++k) {
      const double x = h * static_cast<double>(k);
      next[k] = (integral_to(x) - integral_to(x - a)) / a;
    }
    g.swap(next);
  }
  return g;
}

}  // namespace

UniformSumDensity::UniformSumDensity(std::vector<double> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw PreconditionError("UniformSumDensity: no bounds");
  for (double a : bounds_)
    if (!(std::isfinite(a) && a > 0.0)) throw PreconditionError("UniformSumDensity: bounds must be positive");
  total_ = std::accumulate(bounds_.begin(), bounds_.end(), 0.0);
  if (bounds_.size() <= kInclusionExclusionMax) {
    long double norm = 1.0L;
    for (double a : bounds_) norm *= a;
    for (std::size_t k = 2; k < bounds_.size(); ++k) norm *= static_cast<long double>(k);
    normaliser_ = norm;
  } else {
    grid_ = convolve_uniforms(bounds_, total_);
  }
}

double UniformSumDensity::inclusion_exclusion(double r) const {
  const std::size_t m = bounds_.size();
  if (m == 1) return 1.0 / bounds_[0];
  const long double x = r;
  long double acc = 0.0L;
  const std::size_t subsets = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    long double shift = 0.0L;
    int parity = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) {
        shift += bounds_[i];
        parity ^= 1;
      }
    const long double base = x - shift;
    if (base <= 0.0L) continue;
    long double term = 1.0L;
    for (std::size_t p = 1; p < m; ++p) term *= base;
    acc += parity ? -term : term;
  }
  return static_cast<double>(std::max(acc, 0.0L) / normaliser_);
}

double UniformSumDensity::operator()(double r) const {
  if (!(r >= 0.0 && r <= total_)) return 0.0;
  // f(r) = f(t - r); evaluating on the lower half keeps fewer
  // inclusion-exclusion terms active.
  const double x = std::min(r, total_ - r);
  if (grid_.empty()) return inclusion_exclusion(x);
  const double pos = x / total_ * static_cast<double>(grid_.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), grid_.size() - 2);
  const double frac = pos - static_cast<double>(k);
  return grid_[k] + frac * (grid_[k + 1] - grid_[k]);
}

double uniform_sum_density(std::span<const double> bounds, double r) {
  return UniformSumDensity(std::vector<double>(bounds.begin(), bounds.end()))(r);
}

MaxAtHalfReport verify_max_at_half(std::span<const double> bounds, std::size_t grid) {
  if (grid < 3) throw PreconditionError("verify_max_at_half: grid must be >= 3");
  const UniformSumDensity f(std::vector<double>(bounds.begin(), bounds.end()));
  const double t = f.total();
  const double cell = t / static_cast<double>(grid - 1);

  MaxAtHalfReport report;
  report.r.resize(grid);
  report.density.resize(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    report.r[k] = k + 1 == grid ? t : cell * static_cast<double>(k);
    report.density[k] = f(report.r[k]);
  }
  const auto best = std::max_element(report.density.begin(), report.density.end());
  report.argmax = static_cast<std::size_t>(best - report.density.begin());
  report.max_value = *best;

  // Ties (plateaus) count: any grid point within one cell of t/2 whose
  // value matches the maximum to rounding.
  const double tie = report.max_value * (1.0 - 1e-12);
  report.max_near_half = false;
  for (std::size_t k = 0; k < grid; ++k)
    if (std::abs(report.r[k] - 0.5 * t) <= cell * (1.0 + 1e-12) && report.density[k] >= tie)
      report.max_near_half = true;

  report.worst_log_second_difference = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < grid; ++k) {
    const double lo = report.density[k - 1], mid = report.density[k], hi = report.density[k + 1];
    if (lo <= 0.0 || mid <= 0.0 || hi <= 0.0) continue;
    const double second = std::log(lo) - 2.0 * std::log(mid) + std::log(hi);
    report.worst_log_second_difference = std::max(report.worst_log_second_difference, second);
  }
  report.log_concave = report.worst_log_second_difference <= 1e-9;
  report.ok = report.max_near_half && report.log_concave;
  return report;
}

namespace {

std::vector<double> dirichlet_margins(std::size_t k, double total, RandomStream& stream) {
  // Gamma(50, 1) as a sum of 50 Exp(1) draws: integer shape, exact.
  const auto shape = static_cast<int>(kMarginPerturbationConcentration);
  std::vector<double> out(k);
  double sum = 0.0;
  for (double& v : out) {
    v = 0.0;
    for (int s = 0; s < shape; ++s) v += stream.exponential();
    sum += v;
  }
  for (double& v : out) v = total * v / sum;
  return out;
}

}  // namespace

MaximalityReport verify_constant_margin_maximality(std::size_t m, std::size_t n, std::size_t trials,
                                                   std::uint64_t proposals, std::uint64_t seed,
                                                   const ChainPlan& plan) {
  if (m < 2 || n < 2) throw PreconditionError("verify_constant_margin_maximality: m, n must be >= 2");
  if ((m - 1) * (n - 1) > 9)
    throw PreconditionError("verify_constant_margin_maximality: (m-1)(n-1) must be <= 9");
  if (trials < 1) throw PreconditionError("verify_constant_margin_maximality: trials must be >= 1");

  MaximalityReport report;
  report.m = m;
  report.n = n;
  report.total = static_cast<double>(m);
  report.constant = mc_volume(MarginSpec::constant(m, n, report.total), proposals, derive_seed(seed, 0), plan);

  RandomStream margins(seed, 0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    MaximalityTrial t;
    t.row_sums = dirichlet_margins(m, report.total, margins);
    t.col_sums = dirichlet_margins(n, report.total, margins);
    // Match totals exactly so rows and columns share one total.
    const double rows = std::accumulate(t.row_sums.begin(), t.row_sums.end(), 0.0);
    const double cols = std::accumulate(t.col_sums.begin(), t.col_sums.end(), 0.0);
    for (double& c : t.col_sums) c *= rows / cols;
    t.estimate = mc_volume(MarginSpec(t.row_sums, t.col_sums), proposals, derive_seed(seed, trial + 1), plan);
    const double se = std::hypot(t.estimate.volume_std_error(), report.constant.volume_std_error());
    const double excess = t.estimate.volume() - report.constant.volume();
    t.z_score = se > 0.0 ? excess / se : (excess > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    t.violation = t.z_score > 3.0;
    if (t.violation) ++report.violations;
    report.trials.push_back(std::move(t));
  }
  return report;
}

double radon_nikodym_ratio(std::size_t r, std::size_t n) {
  if (r < 1 || r >= n) throw PreconditionError("radon_nikodym_ratio: need 1 <= r < n");
  return std::exp(0.5 * static_cast<double>(r));
}

DensityRatioReport binned_density_ratio(const EmpiricalDistribution& target, const EmpiricalDistribution& base,
                                        const BinGrid& grid, std::size_t min_count) {
  if (target.empty() || base.empty()) throw PreconditionError("binned_density_ratio: empty sample");
  if (grid.bins < 1 || !(grid.lo < grid.hi)) throw PreconditionError("binned_density_ratio: bad grid");
  const double width = (grid.hi - grid.lo) / static_cast<double>(grid.bins);
  auto histogram = [&](const EmpiricalDistribution& s) {
    std::vector<std::size_t> counts(grid.bins, 0);
    for (double v : s.values()) {
      if (v < grid.lo || v > grid.hi) continue;
      counts[std::min(grid.bins - 1, static_cast<std::size_t>((v - grid.lo) / width))]++;
    }
    return counts;
  };
  const auto ct = histogram(target);
  const auto cb = histogram(base);
  DensityRatioReport report;
  const double nt = static_cast<double>(target.size());
  const double nb = static_cast<double>(base.size());
  for (std::size_t b = 0; b < grid.bins; ++b) {
    DensityRatioBin bin{grid.lo + width * static_cast<double>(b), grid.lo + width * static_cast<double>(b + 1),
                        ct[b], cb[b], 0.0};
    if (cb[b] > 0) bin.ratio = (static_cast<double>(ct[b]) / nt) / (static_cast<double>(cb[b]) / nb);
    if (ct[b] >= min_count && cb[b] >= min_count) {
      report.max_ratio = std::max(report.max_ratio, bin.ratio);
      ++report.qualifying_bins;
    }
    report.bins.push_back(bin);
  }
  return report;
}

}  // namespace birkhoff
