#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "birkhoff/core/error.hpp"

namespace birkhoff::harness {

class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

enum class ExperimentKind {
  sample,
  marginal,
  submatrix,
  max_entry,
  singular,
  mixing,
  moments,
  vertex_mixture,
  volume,
  oracle_compare,
  radon_ratio,
};

/// snake_case name used in config files ("max_entry").
std::string_view to_string(ExperimentKind kind);
/// CLI subcommand name ("max-entry").
std::string subcommand_name(ExperimentKind kind);
/// Accepts either spelling; throws ConfigError otherwise.
ExperimentKind experiment_from_string(std::string_view name);
std::vector<ExperimentKind> all_experiments();

/// Where the seed came from; echoed into the report.
enum class SeedSource { default_value, config, environment, command_line };
std::string_view to_string(SeedSource source);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::marginal;
  std::vector<std::size_t> n;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  SeedSource seed_source = SeedSource::default_value;
  std::size_t chains = 8;
  unsigned workers = 0;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> spacing;
  double epsilon = 0.5;
  std::size_t k = 2;
  std::size_t t_max = 3;
  std::size_t bins = 64;
  std::size_t m = 3;
  std::size_t trials = 20;
  std::uint64_t proposals = 1'000'000;
  std::size_t bound_vectors = 50;
  std::size_t grid = 101;
  std::size_t r = 1;
  std::string sampler = "gibbs";
  std::string out_dir;
  bool write_csv = true;
  bool write_batch = false;

  /// Per-experiment defaults (sizes and sample counts of the standard runs).
  static ExperimentConfig defaults(ExperimentKind kind);

  /// Throws ConfigError on any constraint violation. Called before any
  /// sampling starts.
  void validate() const;

  /// Single side length for experiments that take one.
  std::size_t single_n() const { return n.front(); }
};

/// Strict parse: unknown keys and wrong types are ConfigErrors. Keys absent
/// from the document keep the experiment's defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Applies the keys present in `doc` on top of `base` (same strictness).
void apply_json(ExperimentConfig& base, const nlohmann::json& doc);

/// Full echo; config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// JSON Schema (draft 2020-12) for config files.
nlohmann::json config_schema();

}  // namespace birkhoff::harness
