#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hspan/core/error.hpp"

namespace hspan {

enum class Protocol { rr, fr };

inline const char* to_string(Protocol p) { return p == Protocol::rr ? "rr" : "fr"; }

struct MetricColumn {
  const char* key;    // machine name
  const char* label;  // table header
  bool higher_is_better;
};

inline std::vector<MetricColumn> metric_columns(Protocol p) {
  if (p == Protocol::rr)
    return {{"ergas", "ERGAS", false}, {"sam", "SAM", false}, {"scc", "SCC", true},
            {"q_avg", "q_avg", true}};
  return {{"d_lambda", "D_lambda", false}, {"d_s", "D_s", false}, {"qnr", "QNR", true}};
}

/// One tile x method evaluation. `values` follows metric_columns() order and
/// is empty when the item failed.
struct ReportRow {
  std::string tile;
  std::string method;
  std::vector<double> values;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct AggregateRow {
  std::string method;
  std::size_t tiles = 0;   // successfully scored
  std::size_t failed = 0;
  std::vector<double> values;  // arithmetic means; empty if no tile scored
};

struct MetricReport {
  Protocol protocol = Protocol::rr;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> methods;  // aggregate order
  std::vector<ReportRow> rows;
  std::vector<AggregateRow> aggregates;

  bool has_failures() const {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.ok(); });
  }
};

/// Unweighted mean over the successful rows of each method, accumulated in
/// row order.
inline std::vector<AggregateRow> aggregate(Protocol protocol, const std::vector<std::string>& methods,
                                           const std::vector<ReportRow>& rows) {
  const std::size_t ncol = metric_columns(protocol).size();
  std::vector<AggregateRow> out;
  for (const auto& m : methods) {
    AggregateRow agg;
    agg.method = m;
    std::vector<double> sum(ncol, 0.0);
    for (const auto& r : rows) {
      if (r.method != m) continue;
      if (!r.ok()) {
        ++agg.failed;
        continue;
      }
      for (std::size_t c = 0; c < ncol; ++c) sum[c] += r.values[c];
      ++agg.tiles;
    }
    if (agg.tiles > 0)
      for (double s : sum) agg.values.push_back(s / static_cast<double>(agg.tiles));
    out.push_back(std::move(agg));
  }
  return out;
}

enum class ReportFormat { csv, json, md };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "md") return ReportFormat::md;
  throw ValidationError("unknown report format '" + s + "'");
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string report_csv(const MetricReport& r) {
  const auto cols = metric_columns(r.protocol);
  std::ostringstream os;
  os << "tile,method";
  for (const auto& c : cols) os << "," << c.label;
  os << ",error\n";
  auto emit = [&](const std::string& tile, const std::string& method,
                  const std::vector<double>& values, const std::string& error) {
    os << csv_field(tile) << "," << csv_field(method);
    for (std::size_t c = 0; c < cols.size(); ++c)
      os << "," << (values.empty() ? std::string() : fixed(values[c], 6));
    os << "," << csv_field(error) << "\n";
  };
  for (const auto& row : r.rows) emit(row.tile, row.method, row.values, row.error);
  for (const auto& agg : r.aggregates)
    emit("mean", agg.method, agg.values, agg.values.empty() ? "no tile scored" : "");
  return os.str();
}

inline std::string report_json(const MetricReport& r) {
  const auto cols = metric_columns(r.protocol);
  auto values_json = [&](const std::vector<double>& v) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < v.size(); ++c) j[cols[c].key] = v[c];
    return j;
  };
  nlohmann::ordered_json j;
  j["protocol"] = to_string(r.protocol);
  j["params"] = nlohmann::ordered_json::parse(r.params.dump());
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  for (const auto& c : cols) columns.push_back(c.key);
  j["columns"] = columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["tile"] = row.tile;
    e["method"] = row.method;
    e["scores"] = values_json(row.values);
    if (!row.ok()) e["error"] = row.error;
    rows.push_back(std::move(e));
  }
  j["rows"] = rows;
  nlohmann::ordered_json aggs = nlohmann::ordered_json::array();
  for (const auto& a : r.aggregates) {
    nlohmann::ordered_json e;
    e["method"] = a.method;
    e["tiles"] = a.tiles;
    e["failed"] = a.failed;
    e["mean"] = values_json(a.values);
    aggs.push_back(std::move(e));
  }
  j["aggregate"] = aggs;
  return j.dump(2) + "\n";
}

// Aggregate table; per column the best value is bold and the second best
// underlined.
inline std::string report_md(const MetricReport& r) {
  const auto cols = metric_columns(r.protocol);
  std::ostringstream os;
  os << "| Method |";
  for (const auto& c : cols) os << " " << c.label << (c.higher_is_better ? " ↑" : " ↓") << " |";
  os << "\n|---|";
  for (std::size_t c = 0; c < cols.size(); ++c) os << "---:|";
  os << "\n";

  std::vector<std::vector<std::string>> cells(r.aggregates.size(),
                                              std::vector<std::string>(cols.size(), "-"));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<double> distinct;
    for (const auto& a : r.aggregates)
      if (!a.values.empty()) distinct.push_back(a.values[c]);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (cols[c].higher_is_better) std::reverse(distinct.begin(), distinct.end());
    for (std::size_t m = 0; m < r.aggregates.size(); ++m) {
      const auto& a = r.aggregates[m];
      if (a.values.empty()) continue;
      std::string cell = fixed(a.values[c], 4);
      if (!distinct.empty() && a.values[c] == distinct[0]) {
        cell = "**" + cell + "**";
      } else if (distinct.size() > 1 && a.values[c] == distinct[1]) {
        cell = "<u>" + cell + "</u>";
      }
      cells[m][c] = cell;
    }
  }
  for (std::size_t m = 0; m < r.aggregates.size(); ++m) {
    os << "| " << r.aggregates[m].method << " |";
    for (const auto& cell : cells[m]) os << " " << cell << " |";
    os << "\n";
  }
  return os.str();
}

}  // namespace detail

inline std::string format_report(const MetricReport& report, ReportFormat format) {
  detail::require(!report.rows.empty(), "report: no rows");
  switch (format) {
    case ReportFormat::csv: return detail::report_csv(report);
    case ReportFormat::json: return detail::report_json(report);
    case ReportFormat::md: return detail::report_md(report);
  }
  return {};
}

inline void emit_report(const MetricReport& report, ReportFormat format,
                        const std::filesystem::path& path) {
  const std::string text = format_report(report, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace hspan
