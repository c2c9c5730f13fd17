// Command line front end: one subcommand per experiment kind.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "birkhoff/harness/batch_io.hpp"
#include "birkhoff/harness/config.hpp"
#include "birkhoff/harness/experiments.hpp"
#include "birkhoff/harness/report.hpp"

namespace bh = birkhoff::harness;

namespace {

constexpr int kUsageError = 2;

// Values set on the command line; unset options leave the config alone.
struct Overrides {
  std::vector<std::size_t> n;
  std::optional<std::size_t> samples, chains, k, t_max, bins, m, trials, bound_vectors, grid, r;
  std::optional<std::uint64_t> burn_in, spacing, proposals;
  std::optional<double> epsilon;
  std::optional<std::string> sampler;
  bool no_csv = false;
  bool write_batch = false;
};

void add_options(CLI::App* sub, bh::ExperimentKind kind, Overrides& o) {
  using K = bh::ExperimentKind;
  sub->add_option("-n,--n", o.n, "matrix side length (several for marginal, oracle-compare)");
  sub->add_option("--samples", o.samples, "number of samples");
  sub->add_option("--chains", o.chains, "independent chains");
  if (kind != K::vertex_mixture) {
    sub->add_option("--burn-in", o.burn_in, "Gibbs burn-in moves");
    sub->add_option("--spacing", o.spacing, "Gibbs moves between samples");
  }
  sub->add_flag("--no-csv", o.no_csv, "skip raw-value CSV files");
  switch (kind) {
    case K::sample:
      sub->add_option("--sampler", o.sampler, "gibbs, rejection, vertex_mixture, iid_exponential, dirichlet_rows");
      sub->add_flag("--write-batch", o.write_batch, "persist the batch to <out>/batch.bdsm");
      break;
    case K::marginal:
    case K::radon_ratio:
      sub->add_option("--bins", o.bins, "histogram bins");
      if (kind == K::radon_ratio) sub->add_option("-r,--r", o.r, "leading row entries");
      break;
    case K::max_entry:
      sub->add_option("--epsilon", o.epsilon, "bound (2+epsilon) log n / n");
      break;
    case K::submatrix:
      sub->add_option("-k,--k", o.k, "block size");
      break;
    case K::mixing:
      sub->add_option("--t-max", o.t_max, "horizon");
      break;
    case K::volume:
      sub->add_option("-m,--m", o.m, "rows of the constant-margin polytope");
      sub->add_option("--trials", o.trials, "margin perturbation trials");
      sub->add_option("--proposals", o.proposals, "proposals per volume estimate");
      sub->add_option("--bound-vectors", o.bound_vectors, "random bound vectors");
      sub->add_option("--grid", o.grid, "grid points per density");
      break;
    default:
      break;
  }
}

void apply(bh::ExperimentConfig& c, const Overrides& o) {
  if (!o.n.empty()) c.n = o.n;
  if (o.samples) c.samples = *o.samples;
  if (o.chains) c.chains = *o.chains;
  if (o.burn_in) c.burn_in = *o.burn_in;
  if (o.spacing) c.spacing = *o.spacing;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.k) c.k = *o.k;
  if (o.t_max) c.t_max = *o.t_max;
  if (o.bins) c.bins = *o.bins;
  if (o.m) c.m = *o.m;
  if (o.trials) c.trials = *o.trials;
  if (o.proposals) c.proposals = *o.proposals;
  if (o.bound_vectors) c.bound_vectors = *o.bound_vectors;
  if (o.grid) c.grid = *o.grid;
  if (o.r) c.r = *o.r;
  if (o.sampler) c.sampler = *o.sampler;
  if (o.no_csv) c.write_csv = false;
  if (o.write_batch) c.write_batch = true;
}

void print_summary(const bh::RunReport& report) {
  for (const auto& v : report.verdicts) {
    std::printf("%s %-32s %.6g %s %.6g (%s)\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.value,
                std::string(bh::to_string(v.comparison)).c_str(), v.threshold, v.threshold_name.c_str());
  }
  if (report.error) std::printf("ERROR %s\n", report.error->c_str());
  std::printf("%s\n", report.passed() ? "all verdicts pass" : "verdicts failed");
}

int inspect(const std::string& path) {
  const auto loaded = bh::load_batch(path);
  const auto& p = loaded.batch.provenance();
  nlohmann::json j{{"n", loaded.batch.n()},
                   {"count", loaded.batch.size()},
                   {"sampler", std::string(birkhoff::to_string(p.sampler))},
                   {"seed", p.seed},
                   {"burn_in", p.burn_in},
                   {"spacing", p.spacing},
                   {"warnings", loaded.warnings}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform sampling from the Birkhoff polytope and checks of its asymptotic laws"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string config_path;
  std::string out_dir;
  bool schema = false;
  bool quiet = false;
  app.add_option("--seed", seed, "master seed (overrides BIRKHOFF_SEED and the config file)");
  app.add_option("--workers", workers, "worker threads (0: all cores); does not change results");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "directory for the report, CSV files and batches");
  app.add_flag("--schema", schema, "print the config JSON schema and exit");
  app.add_flag("-q,--quiet", quiet, "print only the verdict lines");

  std::map<CLI::App*, bh::ExperimentKind> kinds;
  Overrides overrides;
  for (auto kind : bh::all_experiments()) {
    auto* sub = app.add_subcommand(bh::subcommand_name(kind), "run the " + std::string(bh::to_string(kind)) + " experiment");
    add_options(sub, kind, overrides);
    kinds[sub] = kind;
  }
  std::string batch_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "validate a persisted sample batch and print its header");
  inspect_cmd->add_option("path", batch_path, "batch file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  if (schema) {
    std::cout << bh::config_schema().dump(2) << '\n';
    return 0;
  }

  try {
    if (inspect_cmd->parsed()) return inspect(batch_path);

    nlohmann::json file_doc;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        file_doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw bh::ConfigError(std::string("config: ") + e.what());
      }
    }

    std::optional<bh::ExperimentKind> kind;
    for (const auto& [sub, k] : kinds)
      if (sub->parsed()) kind = k;
    if (!kind) {
      if (!file_doc.is_object() || !file_doc.contains("experiment")) {
        std::cerr << "no subcommand given and no experiment in the config\n" << app.help();
        return kUsageError;
      }
      kind = bh::experiment_from_string(file_doc.at("experiment").get<std::string>());
    }

    auto cfg = bh::ExperimentConfig::defaults(*kind);
    if (!config_path.empty()) bh::apply_json(cfg, file_doc);
    apply(cfg, overrides);
    if (workers) cfg.workers = *workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) {
      cfg.seed = *seed;
      cfg.seed_source = bh::SeedSource::command_line;
    }
    bh::apply_seed_environment(cfg);
    cfg.validate();

    const auto report = bh::run_experiment(cfg);
    if (quiet) {
      for (const auto& v : report.verdicts) std::printf("%s %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str());
      if (report.error) std::printf("ERROR %s\n", report.error->c_str());
    } else {
      std::printf("experiment %s seed %llu (%s)\n", std::string(bh::to_string(cfg.experiment)).c_str(),
                  static_cast<unsigned long long>(cfg.seed), std::string(bh::to_string(cfg.seed_source)).c_str());
      print_summary(report);
      if (!cfg.out_dir.empty()) std::printf("report written to %s\n", cfg.out_dir.c_str());
    }
    return bh::exit_status(report);
  } catch (const bh::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
