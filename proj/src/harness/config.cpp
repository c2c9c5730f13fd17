#include "birkhoff/harness/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/harness/thresholds.hpp"
#include "birkhoff/samplers/exact.hpp"
#include "birkhoff/volumes/volumes.hpp"

namespace birkhoff::harness {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 11> kNames{{
    {ExperimentKind::sample, "sample"},
    {ExperimentKind::marginal, "marginal"},
    {ExperimentKind::submatrix, "submatrix"},
    {ExperimentKind::max_entry, "max_entry"},
    {ExperimentKind::singular, "singular"},
    {ExperimentKind::mixing, "mixing"},
    {ExperimentKind::moments, "moments"},
    {ExperimentKind::vertex_mixture, "vertex_mixture"},
    {ExperimentKind::volume, "volume"},
    {ExperimentKind::oracle_compare, "oracle_compare"},
    {ExperimentKind::radon_ratio, "radon_ratio"},
}};

constexpr std::size_t kMaxRejectionN = 5;

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

std::uint64_t as_uint(const json& v, std::string_view key) {
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer()) fail(std::string(key) + " must be nonnegative");
    fail(std::string(key) + " must be an integer");
  }
  return v.get<std::uint64_t>();
}

double as_double(const json& v, std::string_view key) {
  if (!v.is_number()) fail(std::string(key) + " must be a number");
  return v.get<double>();
}

bool as_bool(const json& v, std::string_view key) {
  if (!v.is_boolean()) fail(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, std::string_view key) {
  if (!v.is_string()) fail(std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::size_t as_size(const json& v, std::string_view key) { return static_cast<std::size_t>(as_uint(v, key)); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::string subcommand_name(ExperimentKind kind) {
  std::string s(to_string(kind));
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

ExperimentKind experiment_from_string(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  for (const auto& [k, n] : kNames)
    if (n == s) return k;
  fail("unknown experiment '" + std::string(name) + "'");
}

std::vector<ExperimentKind> all_experiments() {
  std::vector<ExperimentKind> out;
  for (const auto& [k, name] : kNames) out.push_back(k);
  return out;
}

std::string_view to_string(SeedSource source) {
  switch (source) {
    case SeedSource::default_value: return "default";
    case SeedSource::config: return "config";
    case SeedSource::environment: return "environment";
    case SeedSource::command_line: return "command_line";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::sample:
      c.n = {8};
      c.samples = 100;
      c.write_batch = true;
      break;
    case ExperimentKind::marginal:
      c.n = {8, 16, 32, 64};
      c.samples = 20000;
      c.bins = 64;
      break;
    case ExperimentKind::submatrix:
      c.n = {100};
      c.samples = 10000;
      break;
    case ExperimentKind::max_entry:
      c.n = {200};
      c.samples = 500;
      break;
    case ExperimentKind::singular:
      c.n = {256};
      c.samples = 20;
      break;
    case ExperimentKind::mixing:
      c.n = {128};
      c.samples = 100;
      break;
    case ExperimentKind::moments:
      c.n = {64};
      c.samples = 20000;
      break;
    case ExperimentKind::vertex_mixture:
      c.n = {3};
      c.samples = 100000;
      break;
    case ExperimentKind::volume:
      c.n = {3};
      c.samples = 100000;
      break;
    case ExperimentKind::oracle_compare:
      c.n = {3, 4};
      c.samples = 100000;
      break;
    case ExperimentKind::radon_ratio:
      c.n = {32};
      c.samples = 20000;
      c.bins = 32;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (n.empty()) fail("n must not be empty");
  for (auto v : n)
    if (v < 1) fail("n must be >= 1");
  const bool multi = experiment == ExperimentKind::marginal || experiment == ExperimentKind::oracle_compare;
  if (!multi && n.size() != 1) fail("experiment '" + std::string(to_string(experiment)) + "' takes a single n");
  if (samples < 1) fail("samples must be >= 1");
  if (chains < 1) fail("chains must be >= 1");
  if (spacing && *spacing < 1) fail("spacing must be >= 1");
  if (proposals < 1) fail("proposals must be >= 1");
  if (bins < 1) fail("bins must be >= 1");
  const std::size_t n0 = n.front();
  switch (experiment) {
    case ExperimentKind::sample: {
      SamplerId id{};
      try {
        id = sampler_from_string(sampler);
      } catch (const Error&) {
        fail("unknown sampler '" + sampler + "'");
      }
      if (id == SamplerId::rejection && n0 > kMaxRejectionN)
        fail("rejection sampler supports n <= " + std::to_string(kMaxRejectionN));
      if (id == SamplerId::vertex_mixture && n0 > kVertexMixtureMaxN)
        fail("vertex_mixture sampler supports n <= " + std::to_string(kVertexMixtureMaxN));
      break;
    }
    case ExperimentKind::marginal:
      break;
    case ExperimentKind::moments:
      if (n0 < 4) fail("moments needs n >= 4 (uses entry (3,4))");
      break;
    case ExperimentKind::max_entry:
      if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be positive");
      if (n0 < 2) fail("max_entry needs n >= 2");
      break;
    case ExperimentKind::submatrix:
      if (k < 1) fail("k must be >= 1");
      if (k * k > n0) fail("submatrix needs k^2 <= n");
      break;
    case ExperimentKind::mixing:
      if (t_max < 1) fail("t_max must be >= 1");
      if (n0 >= static_cast<std::size_t>(threshold("mixing_asymptotic_min_n").value) && t_max < 2)
        fail("mixing needs t_max >= 2 at this n");
      break;
    case ExperimentKind::singular:
      if (n0 < 2) fail("singular needs n >= 2");
      break;
    case ExperimentKind::vertex_mixture:
      if (n0 < 2 || n0 > kVertexMixtureMaxN)
        fail("vertex_mixture needs 2 <= n <= " + std::to_string(kVertexMixtureMaxN));
      break;
    case ExperimentKind::oracle_compare:
      for (auto v : n)
        if (v < 2 || v > kMaxRejectionN) fail("oracle_compare needs 2 <= n <= " + std::to_string(kMaxRejectionN));
      break;
    case ExperimentKind::volume:
      if (m < 2) fail("m must be >= 2");
      if (n0 < 2 || n0 > kMaxRejectionN) fail("volume needs 2 <= n <= " + std::to_string(kMaxRejectionN));
      if ((m - 1) * (n0 - 1) > kMaxRejectionDimension) fail("(m-1)(n-1) exceeds the rejection dimension cap");
      if (trials < 1) fail("trials must be >= 1");
      if (bound_vectors < 1) fail("bound_vectors must be >= 1");
      if (grid < 3) fail("grid must be >= 3");
      break;
    case ExperimentKind::radon_ratio:
      if (r != 1) fail("radon_ratio supports r = 1 (one-dimensional binning)");
      if (n0 < 2 || r >= n0) fail("radon_ratio needs 1 <= r < n");
      break;
  }
}

void apply_json(ExperimentConfig& c, const json& doc) {
  if (!doc.is_object()) fail("document must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "experiment") {
      if (experiment_from_string(as_string(v, key)) != c.experiment) fail("experiment does not match");
    } else if (key == "n") {
      c.n.clear();
      if (v.is_array()) {
        for (const auto& e : v) c.n.push_back(as_size(e, "n[]"));
      } else {
        c.n.push_back(as_size(v, key));
      }
    } else if (key == "samples") {
      c.samples = as_size(v, key);
    } else if (key == "seed") {
      c.seed = as_uint(v, key);
      c.seed_source = SeedSource::config;
    } else if (key == "seed_source") {
      // Echo only; the source is recomputed on every load.
      as_string(v, key);
    } else if (key == "chains") {
      c.chains = as_size(v, key);
    } else if (key == "workers") {
      c.workers = static_cast<unsigned>(as_uint(v, key));
    } else if (key == "burn_in") {
      if (v.is_null()) c.burn_in.reset(); else c.burn_in = as_uint(v, key);
    } else if (key == "spacing") {
      if (v.is_null()) c.spacing.reset(); else c.spacing = as_uint(v, key);
    } else if (key == "epsilon") {
      c.epsilon = as_double(v, key);
    } else if (key == "k") {
      c.k = as_size(v, key);
    } else if (key == "t_max") {
      c.t_max = as_size(v, key);
    } else if (key == "bins") {
      c.bins = as_size(v, key);
    } else if (key == "m") {
      c.m = as_size(v, key);
    } else if (key == "trials") {
      c.trials = as_size(v, key);
    } else if (key == "proposals") {
      c.proposals = as_uint(v, key);
    } else if (key == "bound_vectors") {
      c.bound_vectors = as_size(v, key);
    } else if (key == "grid") {
      c.grid = as_size(v, key);
    } else if (key == "r") {
      c.r = as_size(v, key);
    } else if (key == "sampler") {
      c.sampler = as_string(v, key);
    } else if (key == "out_dir") {
      c.out_dir = as_string(v, key);
    } else if (key == "write_csv") {
      c.write_csv = as_bool(v, key);
    } else if (key == "write_batch") {
      c.write_batch = as_bool(v, key);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail("document must be a JSON object");
  if (!doc.contains("experiment")) fail("missing key 'experiment'");
  auto c = ExperimentConfig::defaults(experiment_from_string(as_string(doc.at("experiment"), "experiment")));
  apply_json(c, doc);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["n"] = c.n;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["seed_source"] = std::string(to_string(c.seed_source));
  j["chains"] = c.chains;
  j["workers"] = c.workers;
  j["burn_in"] = c.burn_in ? json(*c.burn_in) : json(nullptr);
  j["spacing"] = c.spacing ? json(*c.spacing) : json(nullptr);
  j["epsilon"] = c.epsilon;
  j["k"] = c.k;
  j["t_max"] = c.t_max;
  j["bins"] = c.bins;
  j["m"] = c.m;
  j["trials"] = c.trials;
  j["proposals"] = c.proposals;
  j["bound_vectors"] = c.bound_vectors;
  j["grid"] = c.grid;
  j["r"] = c.r;
  j["sampler"] = c.sampler;
  j["out_dir"] = c.out_dir;
  j["write_csv"] = c.write_csv;
  j["write_batch"] = c.write_batch;
  return j;
}

json config_schema() {
  auto count = [](std::uint64_t minimum, const char* text) {
    return json{{"type", "integer"}, {"minimum", minimum}, {"description", text}};
  };
  auto nullable_count = [](const char* text) {
    return json{{"type", json::array({"integer", "null"})}, {"minimum", 0}, {"description", text}};
  };
  json names = json::array();
  for (auto k : all_experiments()) names.push_back(std::string(to_string(k)));
  json samplers = json::array({"gibbs", "rejection", "vertex_mixture", "iid_exponential", "dirichlet_rows"});

  json props;
  props["experiment"] = {{"enum", names}, {"description", "experiment kind"}};
  props["n"] = {{"oneOf", json::array({json{{"type", "integer"}, {"minimum", 1}},
                                        json{{"type", "array"},
                                             {"minItems", 1},
                                             {"items", {{"type", "integer"}, {"minimum", 1}}}}})},
                {"description", "matrix side length, or a list for marginal and oracle_compare"}};
  props["samples"] = count(1, "number of samples (volume: rejection acceptances)");
  props["seed"] = count(0, "master seed");
  props["seed_source"] = {{"type", "string"}, {"description", "echo only, ignored on input"}};
  props["chains"] = count(1, "independent chains; fixes the output together with the seed");
  props["workers"] = count(0, "worker threads, 0 for hardware concurrency; does not affect output");
  props["burn_in"] = nullable_count("Gibbs burn-in override; null for 10 n^2 ceil(ln n)");
  props["spacing"] = nullable_count("Gibbs spacing override; null for 10 n^2");
  props["epsilon"] = {{"type", "number"}, {"exclusiveMinimum", 0}, {"description", "max_entry epsilon"}};
  props["k"] = count(1, "submatrix block size, k^2 <= n");
  props["t_max"] = count(1, "mixing horizon");
  props["bins"] = count(1, "histogram bins (marginal TV grid, radon_ratio grid)");
  props["m"] = count(2, "volume: number of rows of the constant-margin polytope");
  props["trials"] = count(1, "volume: margin perturbation trials");
  props["proposals"] = count(1, "volume: proposals per Monte Carlo volume estimate");
  props["bound_vectors"] = count(1, "volume: random bound vectors for the uniform-sum check");
  props["grid"] = count(3, "volume: grid points for the uniform-sum check");
  props["r"] = count(1, "radon_ratio: number of leading row entries");
  props["sampler"] = {{"enum", samplers}, {"description", "sample: which sampler to run"}};
  props["out_dir"] = {{"type", "string"}, {"description", "output directory, empty for none"}};
  props["write_csv"] = {{"type", "boolean"}, {"description", "emit raw-value CSV files"}};
  props["write_batch"] = {{"type", "boolean"}, {"description", "persist sampled matrices (sample only)"}};

  return json{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
              {"title", "birkhoff experiment configuration"},
              {"type", "object"},
              {"required", json::array({"experiment"})},
              {"additionalProperties", false},
              {"properties", props}};
}

}  // namespace birkhoff::harness
