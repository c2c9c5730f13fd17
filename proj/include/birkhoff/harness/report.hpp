#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace birkhoff::harness {

enum class Comparison { less, less_equal, greater, greater_equal, equal };
std::string_view to_string(Comparison c);

/// A pass/fail decision. `threshold_name` names the registry entry (or the
/// config key, prefixed "config.") the value was compared against.
struct Verdict {
  std::string name;
  double value = 0.0;
  Comparison comparison = Comparison::less;
  std::string threshold_name;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// Compares value against the registry threshold `threshold_name`.
Verdict judge(std::string name, double value, Comparison cmp, std::string_view threshold_name,
              std::string detail = {});
/// Same with an explicit bound, for thresholds that come from the config.
Verdict judge_against(std::string name, double value, Comparison cmp, std::string threshold_name,
                      double threshold, std::string detail = {});

/// Raw values for external plotting, one CSV per table.
struct RawTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

struct RunReport {
  nlohmann::json config;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  std::deque<RawTable> tables;
  std::optional<std::string> error;
  nlohmann::json telemetry = nlohmann::json::object();

  /// True iff no error occurred and every verdict passed. An empty verdict
  /// list without error counts as passing.
  bool passed() const;

  RawTable& table(const std::string& name, std::vector<std::string> columns);
  const RawTable* find_table(std::string_view name) const;

  /// Everything except telemetry. Deterministic given the config.
  nlohmann::json payload() const;
  /// payload() plus the telemetry block.
  nlohmann::json to_json() const;
};

/// Hex digest (FNV-1a 64) of the raw tables; part of the payload so the
/// determinism check covers values that are not in the JSON.
std::string raw_digest(const std::deque<RawTable>& tables);

/// Writes one CSV per raw table into `dir` as <experiment>_<table>.csv and
/// returns the paths. Tables without rows produce a header-only file.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

/// Writes `table` as CSV with a header row.
void write_csv(const RawTable& table, const std::filesystem::path& path);

}  // namespace birkhoff::harness
