// Runs every acceptance criterion at full size and prints one PASS/FAIL line
// per criterion. Optional argument: directory for the JSON reports.
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "birkhoff/harness/config.hpp"
#include "birkhoff/harness/experiments.hpp"
#include "birkhoff/harness/report.hpp"

using namespace birkhoff::harness;

namespace {

struct Criterion {
  int id;
  std::string title;
  ExperimentKind experiment;
  std::vector<std::string> verdicts;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "oracle equivalence at n=3,4", ExperimentKind::oracle_compare,
       {"ks_x11_n3", "pair_tv_n3", "ks_x11_n4", "pair_tv_n4"}},
      {2, "marginal law of n X_11", ExperimentKind::marginal, {"ks_exp1_n64", "tv_nonincreasing"}},
      {3, "low-order moments at n=64", ExperimentKind::moments,
       {"first_moment_se", "second_moment_rel", "cross_moment_rel"}},
      {4, "max entry exceedance at n=200", ExperimentKind::max_entry, {"exceedance_fraction"}},
      {5, "singular values at n=256", ExperimentKind::singular, {"w1_quarter_circle", "frobenius_identity"}},
      {6, "mixing time 2 at n=128", ExperimentKind::mixing, {"mixing_time_two_fraction", "mean_row_d1_rel"}},
      {7, "submatrix independence at n=100", ExperimentKind::submatrix, {"max_abs_correlation", "energy_ratio"}},
      {8, "vertex mixture at n=3", ExperimentKind::vertex_mixture, {"mean_se", "variance_se", "ks_beta"}},
      {9, "constant-margin volume maximality", ExperimentKind::volume,
       {"maximality_violations", "max_at_half_failures", "rejection_vs_mc_sigma"}},
      {10, "asymptotic volume formula consistency", ExperimentKind::volume,
       {"cm_nonfinite", "cm_rect_square_reduction", "cm_skew_symmetry", "cm_homogeneity",
        "cm_vs_mc_order_of_magnitude"}},
  };
  return list;
}

ExperimentConfig config_for(ExperimentKind kind, const std::string& out_dir) {
  auto cfg = ExperimentConfig::defaults(kind);
  cfg.write_csv = !out_dir.empty();
  cfg.out_dir = out_dir;
  return cfg;
}

RunReport run(const ExperimentConfig& cfg) {
  const auto kind = cfg.experiment;
  const auto start = std::chrono::steady_clock::now();
  auto report = run_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("  ran %-16s %7.1fs\n", std::string(to_string(kind)).c_str(), secs);
  std::fflush(stdout);
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "";
  std::map<ExperimentKind, RunReport> reports;
  std::vector<std::string> lines;
  bool all_pass = true;

  for (const auto& c : criteria()) {
    if (!reports.count(c.experiment)) reports.emplace(c.experiment, run(config_for(c.experiment, out_dir)));
    const auto& rep = reports.at(c.experiment);
    bool pass = !rep.error.has_value();
    std::string detail = rep.error ? "error: " + *rep.error : "";
    for (const auto& name : c.verdicts) {
      const Verdict* found = nullptr;
      for (const auto& v : rep.verdicts)
        if (v.name == name) found = &v;
      char buf[160];
      if (!found) {
        pass = false;
        std::snprintf(buf, sizeof buf, " %s=missing", name.c_str());
      } else {
        pass = pass && found->pass;
        std::snprintf(buf, sizeof buf, " %s=%.6g%s", name.c_str(), found->value, found->pass ? "" : "(fail)");
      }
      detail += buf;
    }
    all_pass = all_pass && pass;
    char head[128];
    std::snprintf(head, sizeof head, "%s criterion %2d: %s |", pass ? "PASS" : "FAIL", c.id, c.title.c_str());
    lines.push_back(head + detail);
  }

  // Criterion 11: fresh runs with the same config reproduce the payloads
  // byte for byte.
  bool identical = true;
  std::string differing;
  for (const auto& [kind, first] : reports) {
    const auto again = run(config_for(kind, out_dir));
    if (again.payload().dump() != first.payload().dump()) {
      identical = false;
      differing += " " + std::string(to_string(kind));
    }
  }
  all_pass = all_pass && identical;
  lines.push_back(std::string(identical ? "PASS" : "FAIL") + " criterion 11: deterministic report payloads |" +
                  (identical ? " " + std::to_string(reports.size()) + " experiments identical"
                             : " differing:" + differing));

  for (const auto& line : lines) std::printf("%s\n", line.c_str());
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all_pass ? 0 : 1;
}
