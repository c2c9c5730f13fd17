#include "birkhoff/harness/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <string>
#include <thread>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/random.hpp"
#include "birkhoff/core/reference_law.hpp"
#include "birkhoff/harness/batch_io.hpp"
#include "birkhoff/harness/thresholds.hpp"
#include "birkhoff/samplers/exact.hpp"
#include "birkhoff/samplers/gibbs.hpp"
#include "birkhoff/samplers/models.hpp"
#include "birkhoff/statistics/distances.hpp"
#include "birkhoff/statistics/mixing.hpp"
#include "birkhoff/statistics/moments.hpp"
#include "birkhoff/statistics/spectral.hpp"
#include "birkhoff/volumes/volumes.hpp"

namespace birkhoff::harness {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json to_json(const DistanceReport& r) {
  return {{"statistic", std::string(to_string(r.statistic))},
          {"value", number(r.value)},
          {"std_error", number(r.std_error)},
          {"sample_sizes", r.sample_sizes},
          {"grid", r.grid}};
}

json to_json(const VolumeEstimate& v) {
  return {{"method", std::string(to_string(v.method))},
          {"log_volume", number(v.log_volume)},
          {"std_error", number(v.std_error)},
          {"volume", number(v.volume())},
          {"proposals", v.proposals},
          {"accepted", v.accepted}};
}

json to_json(const MixingReport& r) {
  json j{{"n", r.n}, {"d", r.d}, {"d_row_mean", r.d_row_mean}};
  j["mixing_time"] = r.mixing_time ? json(*r.mixing_time) : json(nullptr);
  return j;
}

std::string tv_grid_label(const BinGrid& g) {
  return "[" + std::to_string(g.lo) + "," + std::to_string(g.hi) + "]/" + std::to_string(g.bins) + "+overflow";
}

struct Runner {
  const ExperimentConfig& cfg;
  RunReport& report;
  ChainPlan plan;
  std::uint64_t gibbs_moves = 0;
  std::uint64_t rejection_proposals = 0;

  GibbsConfig gibbs(std::size_t n) const {
    auto g = GibbsConfig::defaults(n);
    if (cfg.burn_in) g.burn_in = *cfg.burn_in;
    if (cfg.spacing) g.spacing = *cfg.spacing;
    return g;
  }

  void count_moves(const GibbsConfig& g, std::size_t count) {
    if (g.n < 2) return;
    gibbs_moves += static_cast<std::uint64_t>(plan.chains) * g.burn_in + static_cast<std::uint64_t>(count) * g.spacing;
  }

  template <class Extract>
  auto extract(std::size_t n, std::size_t count, std::uint64_t seed, Extract e) {
    const auto g = gibbs(n);
    count_moves(g, count);
    return gibbs_extract(g, count, seed, plan, e);
  }

  SampleBatch batch(std::size_t n, std::size_t count, std::uint64_t seed) {
    const auto g = gibbs(n);
    count_moves(g, count);
    return gibbs_batch(g, count, seed, plan);
  }

  std::uint64_t seed(std::uint64_t tag) const { return derive_seed(cfg.seed, tag); }

  void verdict(Verdict v) { report.verdicts.push_back(std::move(v)); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Lag-one autocorrelation of successive samples within each chain, pooled.
// Values arrive concatenated in chain order.
double lag_one_autocorrelation(const std::vector<double>& x, std::size_t chains) {
  const double mean = pairwise_sum(x) / static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  std::size_t start = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    const std::size_t len = chain_share(x.size(), chains, c);
    for (std::size_t i = start; i < start + len; ++i) {
      den += (x[i] - mean) * (x[i] - mean);
      if (i + 1 < start + len) num += (x[i] - mean) * (x[i + 1] - mean);
    }
    start += len;
  }
  return den > 0.0 ? num / den : 0.0;
}

// ---------------------------------------------------------------- sample

void run_sample(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const auto id = sampler_from_string(R.cfg.sampler);
  const std::uint64_t seed = R.seed(1);
  SampleBatch batch(n, Provenance{id, seed, 0, 0});
  switch (id) {
    case SamplerId::gibbs:
      batch = R.batch(n, R.cfg.samples, seed);
      break;
    case SamplerId::rejection: {
      auto res = rejection_exact(n, R.cfg.samples, seed, R.plan);
      R.rejection_proposals += res.proposals;
      R.report.results["acceptance_rate"] = res.acceptance_rate();
      batch = std::move(res.batch);
      break;
    }
    case SamplerId::vertex_mixture:
      batch = vertex_mixture(n, R.cfg.samples, seed);
      break;
    case SamplerId::iid_exponential:
      batch = iid_exponential_batch(n, R.cfg.samples, seed);
      break;
    case SamplerId::dirichlet_rows:
      batch = dirichlet_row_batch(n, R.cfg.samples, seed);
      break;
  }
  auto& x11 = R.report.table("x11", {"value"});
  double worst = 0.0;
  std::size_t negative = 0;
  double max_entry = 0.0;
  for (const auto& m : batch) {
    x11.add({m(0, 0)});
    max_entry = std::max(max_entry, m.max_entry());
    for (double v : m.entries())
      if (!(v >= 0.0)) ++negative;
    if (id == SamplerId::iid_exponential) continue;
    if (id == SamplerId::dirichlet_rows) {
      for (double s : row_sums(m)) worst = std::max(worst, std::abs(s - 1.0));
    } else {
      worst = std::max(worst, check_doubly_stochastic(m, 1.0).max_violation);
    }
  }
  R.report.results["sampler"] = std::string(to_string(id));
  R.report.results["provenance"] = {{"seed", batch.provenance().seed},
                                    {"burn_in", batch.provenance().burn_in},
                                    {"spacing", batch.provenance().spacing}};
  R.report.results["count"] = batch.size();
  R.report.results["max_entry"] = max_entry;
  R.report.results["max_margin_violation"] = worst;
  R.verdict(judge("negative_entries", static_cast<double>(negative), Comparison::less_equal, "failures_max"));
  if (id != SamplerId::iid_exponential)
    R.verdict(judge("margin_violation", worst, Comparison::less_equal, "sample_ds_tol"));
  if (R.cfg.write_batch && !R.cfg.out_dir.empty()) {
    std::filesystem::create_directories(R.cfg.out_dir);
    persist_batch(batch, std::filesystem::path(R.cfg.out_dir) / "batch.bdsm");
    R.report.results["batch_file"] = "batch.bdsm";
  }
}

// -------------------------------------------------------------- marginal

void run_marginal(Runner& R) {
  auto ns = R.cfg.n;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const auto exp1 = ReferenceLaw::exp1();
  const BinGrid grid{0.0, threshold("marginal_tv_grid_hi").value, R.cfg.bins};
  auto& summary = R.report.table("tv_by_n", {"n", "ks", "tv", "tv_se", "w1"});
  json per_n = json::array();
  std::vector<TvEstimate> tvs;
  double ks_last = 0.0;
  double autocorr_last = 0.0;
  for (std::size_t n : ns) {
    auto& values = R.report.table("values_n" + std::to_string(n), {"value"});
    const double scale = static_cast<double>(n);
    auto x = R.extract(n, R.cfg.samples, R.seed(100 + n), [scale](const SquareMatrix& m) { return scale * m(0, 0); });
    for (double v : x) values.add({v});
    const double autocorr = lag_one_autocorrelation(x, R.plan.chains);
    const EmpiricalDistribution e(std::move(x));
    const double ks = ks_distance(e, exp1);
    const auto tv = tv_binned(e, exp1, grid);
    const double w1 = wasserstein1(e, exp1);

    // Secondary diagnostic: all entries of a few matrices pooled.
    const std::size_t pooled_count = std::min<std::size_t>(R.cfg.samples, 200);
    const auto pooled_batch = R.batch(n, pooled_count, R.seed(1000 + n));
    std::vector<double> pooled;
    pooled.reserve(pooled_count * n * n);
    for (const auto& m : pooled_batch)
      for (double v : m.entries()) pooled.push_back(scale * v);
    const double ks_pooled = ks_distance(EmpiricalDistribution(std::move(pooled)), exp1);

    per_n.push_back({{"n", n},
                     {"ks", to_json(DistanceReport{Statistic::ks, ks, 0.0, {e.size()}, "exact"})},
                     {"tv_binned", to_json(DistanceReport{Statistic::tv_binned, tv.value, tv.std_error, {e.size()},
                                                          tv_grid_label(tv.grid)})},
                     {"wasserstein1", to_json(DistanceReport{Statistic::wasserstein1, w1, 0.0, {e.size()}, "exact"})},
                     {"mean", e.mean()},
                     {"lag_one_autocorrelation", autocorr},
                     {"pooled_entries_ks", {{"value", ks_pooled}, {"matrices", pooled_count}, {"diagnostic", true}}}});
    summary.add({scale, ks, tv.value, tv.std_error, w1});
    tvs.push_back(tv);
    ks_last = ks;
    autocorr_last = autocorr;
  }
  R.report.results["per_n"] = per_n;
  R.verdict(judge("ks_exp1_n" + std::to_string(ns.back()), ks_last, Comparison::less, "marginal_ks_max"));
  R.verdict(judge("spacing_autocorrelation_n" + std::to_string(ns.back()), std::abs(autocorr_last), Comparison::less,
                  "spacing_autocorr_max", "lag one within chains"));
  if (tvs.size() >= 2) {
    double worst = -std::numeric_limits<double>::infinity();
    std::string detail;
    for (std::size_t i = 0; i + 1 < tvs.size(); ++i) {
      const double se = std::hypot(tvs[i].std_error, tvs[i + 1].std_error);
      const double z = (tvs[i + 1].value - tvs[i].value) / se;
      worst = std::max(worst, z);
      detail += (i ? "; " : "") + std::string("n=") + std::to_string(ns[i]) + "->" + std::to_string(ns[i + 1]) +
                " rise/se=" + fmt(z);
    }
    R.verdict(judge("tv_nonincreasing", worst, Comparison::less_equal, "marginal_tv_monotone_se", detail));
  }
}

// --------------------------------------------------------------- moments

void run_moments(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const MomentSpec first{{{0, 0}}, {1}};
  const MomentSpec second{{{0, 0}}, {2}};
  const MomentSpec cross{{{0, 0}, {2, 3}}, {1, 1}};
  first.validate(n);
  second.validate(n);
  cross.validate(n);
  auto rows = R.extract(n, R.cfg.samples, R.seed(2), [&](const SquareMatrix& m) {
    return std::array<double, 3>{moment_product(m, first), moment_product(m, second), moment_product(m, cross)};
  });
  auto& table = R.report.table("values", {"n_x11", "n_x34"});
  std::vector<double> v1, v2, v3;
  for (const auto& r : rows) {
    v1.push_back(r[0]);
    v2.push_back(r[1]);
    v3.push_back(r[2]);
    table.add({r[0], r[0] != 0.0 ? r[2] / r[0] : 0.0});
  }
  const auto m1 = mean_with_error(v1);
  const auto m2 = mean_with_error(v2);
  const auto m3 = mean_with_error(v3);
  auto est = [](const MomentEstimate& e) { return json{{"mean", e.mean}, {"std_error", e.std_error}, {"count", e.count}}; };
  R.report.results["first"] = est(m1);
  R.report.results["second"] = est(m2);
  R.report.results["cross_11_34"] = est(m3);
  R.verdict(judge("first_moment_se", std::abs(m1.mean - 1.0) / m1.std_error, Comparison::less_equal,
                  "moments_mean_se", "mean " + fmt(m1.mean) + " target 1"));
  R.verdict(judge("second_moment_rel", std::abs(m2.mean - 2.0) / 2.0, Comparison::less_equal, "moments_second_rel",
                  "mean " + fmt(m2.mean) + " target 2"));
  R.verdict(judge("cross_moment_rel", std::abs(m3.mean - 1.0), Comparison::less_equal, "moments_cross_rel",
                  "mean " + fmt(m3.mean) + " target 1"));
}

// ------------------------------------------------------------- max entry

void run_max_entry(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const double eps = R.cfg.epsilon;
  const double scale = static_cast<double>(n);
  auto rows = R.extract(n, R.cfg.samples, R.seed(3), [&](const SquareMatrix& m) {
    return std::pair<double, bool>{scale * m.max_entry(), exceeds_max_entry_bound(m, eps)};
  });
  auto& table = R.report.table("max_entry", {"n_max_entry", "exceeds"});
  std::size_t exceeding = 0;
  for (const auto& [v, e] : rows) {
    table.add({v, e ? 1.0 : 0.0});
    exceeding += e ? 1 : 0;
  }
  const double fraction = static_cast<double>(exceeding) / static_cast<double>(rows.size());

  RandomStream stream(R.seed(4), 0);
  std::size_t ref_exceeding = 0;
  for (std::size_t s = 0; s < R.cfg.samples; ++s)
    if (exceeds_max_entry_bound(dirichlet_row_matrix(n, stream), eps)) ++ref_exceeding;
  const double ref_fraction = static_cast<double>(ref_exceeding) / static_cast<double>(R.cfg.samples);

  R.report.results["threshold_scaled"] = (2.0 + eps) * std::log(scale);
  R.report.results["gibbs"] = {{"fraction", fraction}, {"exceeding", exceeding}, {"count", rows.size()}};
  R.report.results["dirichlet_rows_reference"] = {
      {"fraction", ref_fraction}, {"exceeding", ref_exceeding}, {"count", R.cfg.samples}};
  R.verdict(judge("exceedance_fraction", fraction, Comparison::less_equal, "max_entry_fraction"));
}

// -------------------------------------------------------------- singular

void run_singular(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const auto batch = R.batch(n, R.cfg.samples, R.seed(5));
  const auto rep = spectral_test(batch);
  auto& table = R.report.table("sigma", {"index", "sigma"});
  for (std::size_t i = 0; i < rep.pooled.size(); ++i) table.add({static_cast<double>(i), rep.pooled[i]});
  R.report.results["quarter_circle"] = to_json(rep.quarter_circle);
  R.report.results["squared"] = to_json(rep.squared);
  R.report.results["max_frobenius_error"] = rep.max_frobenius_error;
  R.report.results["pooled_count"] = rep.pooled.size();
  R.report.results["pooled_mean"] = rep.pooled.mean();
  R.report.results["quarter_circle_mean"] = ReferenceLaw::quarter_circle().mean();
  R.verdict(judge("w1_quarter_circle", rep.quarter_circle.value, Comparison::less, "singular_w1_max"));
  R.verdict(judge("w1_squared_law", rep.squared.value, Comparison::less, "singular_w1_squared_max"));
  R.verdict(judge("frobenius_identity", rep.max_frobenius_error, Comparison::less_equal, "frobenius_rel_max"));
}

// ---------------------------------------------------------------- mixing

void run_mixing(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const std::size_t t_max = R.cfg.t_max;
  auto reports = R.extract(n, R.cfg.samples, R.seed(6), [t_max](const SquareMatrix& m) { return mixing_profile(m, t_max); });
  auto& curve = R.report.table("d_t", {"t", "d_t", "d_t_row_mean"});
  auto& per = R.report.table("d_t_per_matrix", {"matrix", "t", "d_t", "d_t_row_mean"});
  std::vector<double> mean_d(t_max, 0.0), mean_row(t_max, 0.0);
  json per_matrix = json::array();
  json times = json::object();
  std::size_t unmixed = 0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    for (std::size_t t = 0; t < t_max; ++t) {
      per.add({static_cast<double>(k), static_cast<double>(t + 1), r.d[t], r.d_row_mean[t]});
      mean_d[t] += r.d[t];
      mean_row[t] += r.d_row_mean[t];
    }
    const std::string key = r.mixing_time ? std::to_string(*r.mixing_time) : "none";
    times[key] = times.value(key, 0) + 1;
    if (!r.mixing_time) ++unmixed;
    per_matrix.push_back(to_json(r));
  }
  const double count = static_cast<double>(reports.size());
  for (std::size_t t = 0; t < t_max; ++t) {
    mean_d[t] /= count;
    mean_row[t] /= count;
    curve.add({static_cast<double>(t + 1), mean_d[t], mean_row[t]});
  }
  R.report.results["mean_d"] = mean_d;
  R.report.results["mean_d_row_mean"] = mean_row;
  R.report.results["mixing_time_histogram"] = times;
  R.report.results["per_matrix"] = per_matrix;
  R.report.results["threshold_quarter"] = kMixingThreshold;

  const double mono_tol = threshold("mixing_monotone_tol").value;
  std::size_t nonmonotone = 0;
  for (const auto& r : reports)
    for (std::size_t t = 0; t + 1 < r.d.size(); ++t)
      if (r.d[t + 1] > r.d[t] + mono_tol) ++nonmonotone;
  R.verdict(judge("d_t_nonincreasing", static_cast<double>(nonmonotone), Comparison::less_equal, "failures_max",
                  "steps with d(t+1) > d(t) + " + fmt(mono_tol) + " (mixing_monotone_tol)"));

  const auto min_n = static_cast<std::size_t>(threshold("mixing_asymptotic_min_n").value);
  if (n >= min_n && t_max >= 2) {
    const double d1_min = threshold("mixing_d1_min").value;
    const double d2_max = threshold("mixing_d2_max").value;
    std::size_t pattern = 0;
    for (const auto& r : reports)
      if (r.d[0] > d1_min && r.d[1] < d2_max) ++pattern;
    R.report.results["pattern_count"] = pattern;
    R.verdict(judge("mixing_time_two_fraction", static_cast<double>(pattern) / count, Comparison::greater_equal,
                    "mixing_pattern_fraction",
                    std::to_string(pattern) + " of " + std::to_string(reports.size()) + " with d(1) > " + fmt(d1_min) +
                        " (mixing_d1_min) and d(2) < " + fmt(d2_max) + " (mixing_d2_max)"));
    const double target = std::exp(-1.0);
    R.verdict(judge("mean_row_d1_rel", std::abs(mean_row[0] - target) / target, Comparison::less_equal,
                    "mixing_mean_d1_rel", "row-averaged mean d(1) " + fmt(mean_row[0]) + " target 1/e"));
  } else {
    R.verdict(judge("unmixed_within_t_max", static_cast<double>(unmixed), Comparison::less_equal, "failures_max",
                    "below mixing_asymptotic_min_n only mixing within t_max is asserted"));
  }
}

// ------------------------------------------------------------- submatrix

void run_submatrix(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const std::size_t k = R.cfg.k;
  auto blocks_per = R.extract(n, R.cfg.samples, R.seed(7), [k](const SquareMatrix& m) { return rescaled_block(m, k); });
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) cols.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
  auto& table = R.report.table("blocks", cols);
  std::vector<double> flat;
  flat.reserve(blocks_per.size() * k * k);
  for (auto& b : blocks_per) {
    flat.insert(flat.end(), b.begin(), b.end());
    table.add(std::move(b));
  }
  const auto rep = submatrix_independence_test(flat, n, k, R.seed(8));
  R.report.results["k"] = rep.k;
  R.report.results["samples"] = rep.samples;
  R.report.results["max_abs_correlation"] = rep.max_abs_correlation ? json(*rep.max_abs_correlation) : json(nullptr);
  R.report.results["zero_variance"] = rep.zero_variance;
  R.report.results["energy"] = to_json(DistanceReport{Statistic::energy, rep.energy_distance, 0.0,
                                                      {rep.samples, rep.samples}, "none"});
  R.report.results["reference_self_distance"] = rep.reference_self_distance;
  R.report.results["warnings"] = rep.warnings;
  const double corr = rep.max_abs_correlation.value_or(std::numeric_limits<double>::infinity());
  R.verdict(judge("max_abs_correlation", corr, Comparison::less, "submatrix_corr_max",
                  rep.zero_variance ? "zero variance: correlation undefined" : ""));
  R.verdict(judge("energy_ratio", rep.energy_distance / rep.reference_self_distance, Comparison::less_equal,
                  "submatrix_energy_ratio"));
}

// -------------------------------------------------------- vertex mixture

void run_vertex_mixture(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const auto batch = vertex_mixture(n, R.cfg.samples, R.seed(9));
  std::vector<double> x;
  x.reserve(batch.size());
  auto& table = R.report.table("m11", {"value"});
  for (const auto& m : batch) {
    x.push_back(m(0, 0));
    table.add({m(0, 0)});
  }
  const EmpiricalDistribution e(x);
  const double N = static_cast<double>(e.size());
  const double mean = e.mean();
  const double var = e.variance();
  std::vector<double> fourth;
  fourth.reserve(x.size());
  for (double v : x) fourth.push_back(std::pow(v - mean, 4));
  const double mu4 = pairwise_sum(fourth) / N;
  double a = 1.0;
  for (std::size_t i = 2; i < n; ++i) a *= static_cast<double>(i);
  const double b = static_cast<double>(n - 1) * a;
  const double target_mean = a / (a + b);
  const double target_var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
  const double se_mean = std::sqrt(var / N);
  const double se_var = std::sqrt(std::max(mu4 - var * var, 0.0) / N);
  const auto law = ReferenceLaw::beta(a, b);
  const double ks = ks_distance(e, law);
  R.report.results["beta"] = {{"a", a}, {"b", b}};
  R.report.results["mean"] = {{"value", mean}, {"std_error", se_mean}, {"target", target_mean}};
  R.report.results["variance"] = {{"value", var}, {"std_error", se_var}, {"target", target_var}};
  R.report.results["ks"] = to_json(DistanceReport{Statistic::ks, ks, 0.0, {e.size()}, "exact"});
  R.verdict(judge("mean_se", std::abs(mean - target_mean) / se_mean, Comparison::less_equal, "vertex_mean_se"));
  R.verdict(judge("variance_se", std::abs(var - target_var) / se_var, Comparison::less_equal, "vertex_var_se"));
  R.verdict(judge("ks_beta", ks, Comparison::less, "vertex_ks_max"));
}

// -------------------------------------------------------- oracle compare

void run_oracle_compare(Runner& R) {
  const auto bins = static_cast<std::size_t>(threshold("oracle_pair_bins").value);
  json per_n = json::array();
  for (std::size_t n : R.cfg.n) {
    const double scale = static_cast<double>(n);
    const std::size_t ex_i = 1, ex_j = n >= 3 ? 2 : 1;
    auto features = [&](const SquareMatrix& m) {
      return std::array<double, 5>{scale * m(0, 0), scale * m(0, 1), scale * m(1, 1), scale * m(ex_i, ex_j),
                                   scale * m.max_entry()};
    };
    const auto gibbs = R.extract(n, R.cfg.samples, R.seed(200 + n), features);
    const auto exact = rejection_exact(n, R.cfg.samples, R.seed(300 + n), R.plan);
    R.rejection_proposals += exact.proposals;
    std::vector<std::array<double, 5>> oracle;
    oracle.reserve(exact.batch.size());
    for (const auto& m : exact.batch) oracle.push_back(features(m));

    auto column = [](const std::vector<std::array<double, 5>>& rows, std::size_t c) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& r : rows) out.push_back(r[c]);
      return out;
    };
    auto& table = R.report.table("pairs_n" + std::to_string(n), {"source", "n_x11", "n_x12", "n_x22"});
    for (const auto& r : gibbs) table.add({0.0, r[0], r[1], r[2]});
    for (const auto& r : oracle) table.add({1.0, r[0], r[1], r[2]});

    const auto g11 = column(gibbs, 0), g12 = column(gibbs, 1), g22 = column(gibbs, 2), gex = column(gibbs, 3),
               gmax = column(gibbs, 4);
    const auto o11 = column(oracle, 0), o12 = column(oracle, 1), o22 = column(oracle, 2), omax = column(oracle, 4);
    const double ks = ks_two_sample(EmpiricalDistribution(g11), EmpiricalDistribution(o11));
    const double tv_12 = tv_binned_2d(g11, g12, o11, o12, bins);
    const double tv_22 = tv_binned_2d(g11, g22, o11, o22, bins);
    const double ks_max = ks_two_sample(EmpiricalDistribution(gmax), EmpiricalDistribution(omax));
    const double ks_ex = ks_two_sample(EmpiricalDistribution(g11), EmpiricalDistribution(gex));
    const std::string sizes = std::to_string(gibbs.size()) + "+" + std::to_string(oracle.size());
    per_n.push_back({{"n", n},
                     {"ks_x11", to_json(DistanceReport{Statistic::ks, ks, 0.0, {gibbs.size(), oracle.size()}, "exact"})},
                     {"pair_tv_x11_x12", tv_12},
                     {"pair_tv_x11_x22", tv_22},
                     {"pair_grid", std::to_string(bins) + "x" + std::to_string(bins) + " pooled quantile cells"},
                     {"ks_max_entry", ks_max},
                     {"ks_exchangeability", ks_ex},
                     {"exchangeability_entry", {ex_i + 1, ex_j + 1}},
                     {"gibbs_mean_x11", EmpiricalDistribution(g11).mean()},
                     {"exact_mean_x11", EmpiricalDistribution(o11).mean()},
                     {"acceptance_rate", exact.acceptance_rate()},
                     {"proposals", exact.proposals}});
    const std::string tag = "_n" + std::to_string(n);
    R.verdict(judge("ks_x11" + tag, ks, Comparison::less, "oracle_ks_max", sizes));
    R.verdict(judge("pair_tv" + tag, std::max(tv_12, tv_22), Comparison::less, "oracle_pair_tv_max",
                    "max over pairs (x11,x12) and (x11,x22)"));
    R.verdict(judge("ks_max_entry" + tag, ks_max, Comparison::less, "oracle_max_entry_ks_max"));
    R.verdict(judge("ks_exchangeability" + tag, ks_ex, Comparison::less, "exchangeability_ks_max"));
  }
  R.report.results["per_n"] = per_n;
}

// ---------------------------------------------------------------- volume

double cm_asymmetric_terms(double m, double n) {
  return -0.5 * (n - 1.0) * std::log(m) - 0.5 * (m - 1.0) * std::log(n) - (m - 1.0) * (n - 1.0) * std::log(n);
}

void run_volume(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const double sigma = threshold("volume_sigma").value;

  // Constant margins maximise the volume.
  const auto maxim = verify_constant_margin_maximality(R.cfg.m, n, R.cfg.trials, R.cfg.proposals, R.seed(10), R.plan);
  auto& trials = R.report.table("maximality_trials", {"trial", "log_volume", "std_error", "z"});
  json trial_json = json::array();
  for (std::size_t t = 0; t < maxim.trials.size(); ++t) {
    const auto& tr = maxim.trials[t];
    trials.add({static_cast<double>(t), tr.estimate.log_volume, tr.estimate.std_error, tr.z_score});
    trial_json.push_back({{"row_sums", tr.row_sums},
                          {"col_sums", tr.col_sums},
                          {"estimate", to_json(tr.estimate)},
                          {"z", number(tr.z_score)},
                          {"violation", tr.violation}});
  }
  R.report.results["maximality"] = {{"m", maxim.m},
                                    {"n", maxim.n},
                                    {"total", maxim.total},
                                    {"constant", to_json(maxim.constant)},
                                    {"trials", trial_json},
                                    {"violations", maxim.violations}};
  R.verdict(judge("maximality_violations", static_cast<double>(maxim.violations), Comparison::less_equal,
                  "failures_max", "violation: z > " + fmt(sigma) + " (volume_sigma)"));

  // Uniform-sum densities peak at half the total.
  RandomStream bounds_stream(R.seed(11), 0);
  auto& half = R.report.table("max_at_half", {"vector", "m", "total", "argmax_r", "max_density", "worst_log_d2", "ok"});
  std::size_t half_failures = 0;
  std::size_t inexact = 0;
  for (std::size_t v = 0; v < R.cfg.bound_vectors; ++v) {
    const std::size_t len = 1 + static_cast<std::size_t>(bounds_stream.below(6));
    std::vector<double> bounds(len);
    for (auto& b : bounds) b = bounds_stream.uniform(0.1, 5.0);
    const auto rep = verify_max_at_half(bounds, R.cfg.grid);
    if (!rep.ok) ++half_failures;
    if (!UniformSumDensity(bounds).exact()) ++inexact;
    double total = 0.0;
    for (double b : bounds) total += b;
    half.add({static_cast<double>(v), static_cast<double>(len), total, rep.r[rep.argmax], rep.max_value,
              rep.worst_log_second_difference, rep.ok ? 1.0 : 0.0});
  }
  R.report.results["max_at_half"] = {{"vectors", R.cfg.bound_vectors}, {"failures", half_failures}, {"grid", R.cfg.grid}};
  R.verdict(judge("max_at_half_failures", static_cast<double>(half_failures), Comparison::less_equal, "failures_max"));

  // Exact rejection acceptance vs Monte Carlo volume of the Birkhoff polytope.
  const auto exact = rejection_exact(n, R.cfg.samples, R.seed(12), R.plan);
  R.rejection_proposals += exact.proposals;
  const double p = exact.acceptance_rate();
  const double p_se = std::sqrt(p * (1.0 - p) / static_cast<double>(exact.proposals));
  const auto mc = mc_volume(MarginSpec::birkhoff(n), R.cfg.proposals, R.seed(13), R.plan);
  const double z_rej = std::abs(p - mc.volume()) / std::hypot(p_se, mc.volume_std_error());
  R.report.results["rejection_vs_mc"] = {{"acceptance_rate", p},
                                         {"acceptance_std_error", p_se},
                                         {"rejection_proposals", exact.proposals},
                                         {"mc", to_json(mc)},
                                         {"z", z_rej}};
  R.verdict(judge("rejection_vs_mc_sigma", z_rej, Comparison::less_equal, "volume_sigma"));

  // Homogeneity of Lebesgue measure under margin scaling.
  const double dim = static_cast<double>((n - 1) * (n - 1));
  double worst_h = 0.0;
  json homog = json::array();
  for (double lambda : {0.5, 2.0}) {
    const auto scaled = mc_volume(MarginSpec::birkhoff(n).scaled(lambda), R.cfg.proposals,
                                  R.seed(lambda < 1.0 ? 14 : 15), R.plan);
    const double shift = scaled.log_volume - mc.log_volume - dim * std::log(lambda);
    const double z = std::abs(shift) / std::hypot(scaled.std_error, mc.std_error);
    worst_h = std::max(worst_h, z);
    homog.push_back({{"lambda", lambda}, {"estimate", to_json(scaled)}, {"shift", shift}, {"z", z}});
  }
  R.report.results["mc_homogeneity"] = homog;
  R.verdict(judge("mc_homogeneity_sigma", worst_h, Comparison::less_equal, "volume_sigma"));

  // m x 2 cross-sections: volume equals prod(a) times the uniform-sum density.
  const std::vector<double> a{1.0, 2.0, 3.0};
  double worst_c = 0.0;
  json cross = json::array();
  for (double r : {1.5, 3.0, 4.5}) {
    const MarginSpec spec(a, {r, 6.0 - r});
    const auto est = mc_volume(spec, R.cfg.proposals, R.seed(16 + static_cast<std::uint64_t>(2 * r)), R.plan);
    const double predicted = 6.0 * uniform_sum_density(a, r);
    const double z = std::abs(est.volume() - predicted) / est.volume_std_error();
    worst_c = std::max(worst_c, z);
    cross.push_back({{"r", r}, {"estimate", to_json(est)}, {"predicted", predicted}, {"z", z}});
  }
  R.report.results["m_by_2_cross_section"] = cross;
  R.verdict(judge("m_by_2_density_sigma", worst_c, Comparison::less_equal, "volume_sigma"));

  // Asymptotic formulas.
  auto& cm = R.report.table("canfield_mckay", {"n", "log_volume"});
  std::size_t nonfinite = 0;
  for (std::size_t s = 2; s <= 64; ++s) {
    const double v = canfield_mckay_birkhoff(s);
    if (!std::isfinite(v)) ++nonfinite;
    cm.add({static_cast<double>(s), v});
  }
  double reduce_gap = 0.0, skew_gap = 0.0, homog_gap = 0.0;
  for (std::size_t i = 2; i <= 12; ++i) {
    reduce_gap = std::max(reduce_gap, std::abs(canfield_mckay_rect(i, i) - canfield_mckay_birkhoff(i)));
    for (std::size_t j = 2; j <= 12; ++j) {
      const double v = canfield_mckay_rect(i, j);
      if (!std::isfinite(v)) ++nonfinite;
      const double di = static_cast<double>(i), dj = static_cast<double>(j);
      const double asym = cm_asymmetric_terms(di, dj) - cm_asymmetric_terms(dj, di);
      skew_gap = std::max(skew_gap, std::abs(v - canfield_mckay_rect(j, i) - asym));
      for (double lambda : {0.5, 2.0}) {
        const double shifted = canfield_mckay_rect(i, j, lambda * di);
        if (!std::isfinite(shifted)) ++nonfinite;
        homog_gap = std::max(homog_gap, std::abs(shifted - v - (di - 1.0) * (dj - 1.0) * std::log(lambda)));
      }
    }
  }
  const double cm3 = canfield_mckay_birkhoff(n);
  const double gap = cm3 - mc.log_volume;
  R.report.results["canfield_mckay"] = {{"n", n},
                                        {"formula_log_volume", cm3},
                                        {"mc_log_volume", mc.log_volume},
                                        {"log_discrepancy", gap},
                                        {"rect_equals_square_max_gap", reduce_gap},
                                        {"rect_skew_symmetry_max_gap", skew_gap},
                                        {"rect_homogeneity_max_gap", homog_gap}};
  R.verdict(judge("cm_nonfinite", static_cast<double>(nonfinite), Comparison::less_equal, "failures_max"));
  R.verdict(judge("cm_rect_square_reduction", reduce_gap, Comparison::less_equal, "formula_exact_tol"));
  R.verdict(judge("cm_skew_symmetry", skew_gap, Comparison::less_equal, "formula_exact_tol"));
  R.verdict(judge("cm_homogeneity", homog_gap, Comparison::less_equal, "formula_exact_tol"));
  R.verdict(judge("cm_vs_mc_order_of_magnitude", std::abs(gap), Comparison::less, "cm_order_of_magnitude",
                  "formula " + fmt(cm3) + " vs Monte Carlo " + fmt(mc.log_volume)));
}

// ----------------------------------------------------------- radon ratio

void run_radon_ratio(Runner& R) {
  const std::size_t n = R.cfg.single_n();
  const double scale = static_cast<double>(n);
  auto target = R.extract(n, R.cfg.samples, R.seed(17), [scale](const SquareMatrix& m) { return scale * m(0, 0); });
  RandomStream stream(R.seed(18), 0);
  std::vector<double> base(R.cfg.samples);
  std::vector<double> row(n);
  for (auto& v : base) {
    for (auto& e : row) e = stream.exponential();
    v = scale * row[0] / pairwise_sum(row);
  }
  const BinGrid grid{0.0, 8.0, R.cfg.bins};
  const auto min_count = static_cast<std::size_t>(threshold("radon_min_count").value);
  const auto rep = binned_density_ratio(EmpiricalDistribution(std::move(target)), EmpiricalDistribution(std::move(base)),
                                        grid, min_count);
  const double bound = radon_nikodym_ratio(R.cfg.r, n);
  auto& table = R.report.table("ratio", {"lo", "hi", "gibbs_count", "dirichlet_count", "ratio"});
  for (const auto& b : rep.bins)
    table.add({b.lo, b.hi, static_cast<double>(b.target_count), static_cast<double>(b.base_count), b.ratio});
  R.report.results["bound"] = bound;
  R.report.results["max_ratio"] = rep.max_ratio;
  R.report.results["qualifying_bins"] = rep.qualifying_bins;
  R.report.results["grid"] = tv_grid_label(grid);
  R.verdict(judge("qualifying_bins", static_cast<double>(rep.qualifying_bins), Comparison::greater_equal,
                  "radon_min_bins"));
  R.verdict(judge("max_ratio_over_bound", rep.max_ratio / bound, Comparison::less_equal, "radon_ratio_slack",
                  "bound e^{r/2} = " + fmt(bound)));
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void apply_seed_environment(ExperimentConfig& cfg) {
  if (cfg.seed_source == SeedSource::command_line) return;
  const char* raw = std::getenv("BIRKHOFF_SEED");
  if (!raw || !*raw) return;
  const std::string_view s(raw);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("config: BIRKHOFF_SEED must be an unsigned integer, got '" + std::string(s) + "'");
  cfg.seed = value;
  cfg.seed_source = SeedSource::environment;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.config = config_to_json(cfg);
  Runner R{cfg, report, ChainPlan{cfg.chains, cfg.workers}};
  const auto started = std::chrono::steady_clock::now();
  report.telemetry["started_at"] = utc_now();
  try {
    switch (cfg.experiment) {
      case ExperimentKind::sample: run_sample(R); break;
      case ExperimentKind::marginal: run_marginal(R); break;
      case ExperimentKind::moments: run_moments(R); break;
      case ExperimentKind::max_entry: run_max_entry(R); break;
      case ExperimentKind::singular: run_singular(R); break;
      case ExperimentKind::mixing: run_mixing(R); break;
      case ExperimentKind::submatrix: run_submatrix(R); break;
      case ExperimentKind::vertex_mixture: run_vertex_mixture(R); break;
      case ExperimentKind::oracle_compare: run_oracle_compare(R); break;
      case ExperimentKind::volume: run_volume(R); break;
      case ExperimentKind::radon_ratio: run_radon_ratio(R); break;
    }
  } catch (const std::exception& e) {
    report.error = e.what();
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  report.telemetry["wall_clock_seconds"] = elapsed.count();
  report.telemetry["gibbs_moves"] = R.gibbs_moves;
  report.telemetry["rejection_proposals"] = R.rejection_proposals;
  report.telemetry["workers"] = R.plan.effective_workers();
  report.telemetry["hardware_concurrency"] = std::thread::hardware_concurrency();

  if (!cfg.out_dir.empty()) {
    try {
      const std::filesystem::path dir(cfg.out_dir);
      std::filesystem::create_directories(dir);
      if (cfg.write_csv) emit_plot_data(report, dir);
      std::ofstream out(dir / (std::string(to_string(cfg.experiment)) + "_report.json"));
      out << report.to_json().dump(2) << '\n';
      if (!out) throw Error("cannot write report to '" + dir.string() + "'");
    } catch (const std::exception& e) {
      if (!report.error) report.error = std::string("output: ") + e.what();
    }
  }
  return report;
}

int exit_status(const RunReport& report) { return report.passed() ? 0 : 1; }

}  // namespace birkhoff::harness
