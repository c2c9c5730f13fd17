#include "birkhoff/harness/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "birkhoff/core/error.hpp"
#include "birkhoff/harness/thresholds.hpp"

namespace birkhoff::harness {

using nlohmann::json;

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::less: return "<";
    case Comparison::less_equal: return "<=";
    case Comparison::greater: return ">";
    case Comparison::greater_equal: return ">=";
    case Comparison::equal: return "==";
  }
  return "?";
}

namespace {

bool compare(double value, Comparison c, double bound) {
  if (std::isnan(value)) return false;
  switch (c) {
    case Comparison::less: return value < bound;
    case Comparison::less_equal: return value <= bound;
    case Comparison::greater: return value > bound;
    case Comparison::greater_equal: return value >= bound;
    case Comparison::equal: return value == bound;
  }
  return false;
}

// JSON has no NaN or infinity; encode them as strings.
json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Verdict judge_against(std::string name, double value, Comparison cmp, std::string threshold_name, double threshold,
                      std::string detail) {
  Verdict v{std::move(name), value, cmp, std::move(threshold_name), threshold, false, std::move(detail)};
  v.pass = compare(value, cmp, threshold);
  return v;
}

Verdict judge(std::string name, double value, Comparison cmp, std::string_view threshold_name, std::string detail) {
  const auto& t = threshold(threshold_name);
  return judge_against(std::move(name), value, cmp, std::string(t.name), t.value, std::move(detail));
}

void RawTable::add(std::vector<double> row) {
  if (row.size() != columns.size())
    throw PreconditionError("RawTable '" + name + "': row width does not match the header");
  rows.push_back(std::move(row));
}

bool RunReport::passed() const {
  if (error) return false;
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

RawTable& RunReport::table(const std::string& name, std::vector<std::string> columns) {
  tables.push_back(RawTable{name, std::move(columns), {}});
  return tables.back();
}

const RawTable* RunReport::find_table(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string raw_digest(const std::deque<RawTable>& tables) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& t : tables) {
    feed(t.name.data(), t.name.size());
    for (const auto& c : t.columns) feed(c.data(), c.size());
    for (const auto& row : t.rows)
      for (double v : row) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int b = 0; b < 8; ++b) {
          const unsigned char byte = static_cast<unsigned char>(bits >> (8 * b));
          feed(&byte, 1);
        }
      }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json RunReport::payload() const {
  json verdict_list = json::array();
  for (const auto& v : verdicts) {
    json jv{{"name", v.name},
            {"value", number(v.value)},
            {"comparison", std::string(to_string(v.comparison))},
            {"threshold", {{"name", v.threshold_name}, {"value", number(v.threshold)}}},
            {"pass", v.pass}};
    if (!v.detail.empty()) jv["detail"] = v.detail;
    verdict_list.push_back(std::move(jv));
  }
  json tables_json = json::array();
  for (const auto& t : tables)
    tables_json.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows.size()}});
  json p;
  p["config"] = config;
  p["threshold_version"] = std::string(kThresholdVersion);
  p["results"] = results;
  p["verdicts"] = verdict_list;
  p["raw_tables"] = tables_json;
  p["raw_digest"] = raw_digest(tables);
  p["error"] = error ? json(*error) : json(nullptr);
  p["passed"] = passed();
  return p;
}

json RunReport::to_json() const {
  json j{{"payload", payload()}, {"telemetry", telemetry}};
  return j;
}

void write_csv(const RawTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::vector<std::filesystem::path> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string prefix = report.config.value("experiment", std::string("run"));
  std::vector<std::filesystem::path> written;
  for (const auto& t : report.tables) {
    auto path = dir / (prefix + "_" + t.name + ".csv");
    write_csv(t, path);
    written.push_back(std::move(path));
  }
  return written;
}

}  // namespace birkhoff::harness
